/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/contract.hpp"

#include <algorithm>

namespace coldchain {

namespace {

template <typename Variant, std::size_t I = 0>
Variant decodeAlternative(std::string_view op, Reader &r) {
  if constexpr (I == std::variant_size_v<Variant>) {
    throw UnknownOperation(op);
  } else {
    using Alt = std::variant_alternative_t<I, Variant>;
    if (op == Alt::kOp) {
      Variant out = Alt::decode(r);
      r.expectEnd();
      return out;
    }
    return decodeAlternative<Variant, I + 1>(op, r);
  }
}

template <typename Variant>
Bytes encodeVariant(const Variant &v) {
  Writer w;
  std::visit([&w](const auto &args) { args.encode(w); }, v);
  return std::move(w).take();
}

}  // namespace

std::string_view opName(const ContractCall &call) {
  return std::visit([](const auto &a) { return std::decay_t<decltype(a)>::kOp; },
                    call);
}

std::string_view opName(const ContractQuery &query) {
  return std::visit([](const auto &q) { return std::decay_t<decltype(q)>::kOp; },
                    query);
}

Bytes encodeArgs(const ContractCall &call) {
  return encodeVariant(call);
}

Bytes encodeArgs(const ContractQuery &query) {
  return encodeVariant(query);
}

ContractCall decodeCall(std::string_view op, ByteView args) {
  Reader r(args);
  return decodeAlternative<ContractCall>(op, r);
}

ContractQuery decodeQuery(std::string_view op, ByteView args) {
  Reader r(args);
  return decodeAlternative<ContractQuery>(op, r);
}

bool isMutatingOp(std::string_view op) {
  return std::find(ops::kMutating.begin(), ops::kMutating.end(), op)
         != ops::kMutating.end();
}

bool isQueryOp(std::string_view op) {
  return std::find(ops::kQueries.begin(), ops::kQueries.end(), op)
         != ops::kQueries.end();
}

Bytes encodeBoolResult(bool v) {
  return Writer().boolean(v).data();
}

bool decodeBoolResult(ByteView data) {
  Reader r(data);
  bool v = r.boolean();
  r.expectEnd();
  return v;
}

Bytes encodeHistory(const std::vector<MonitoredRecord> &records) {
  Writer w;
  w.u64(records.size());
  for (const auto &rec : records) {
    w.fixed(rec.freezer).str(rec.rule).i64(rec.value).i64(rec.timestamp)
        .boolean(rec.valid);
  }
  return std::move(w).take();
}

std::vector<MonitoredRecord> decodeHistory(ByteView data) {
  Reader r(data);
  std::uint64_t n = r.u64();
  std::vector<MonitoredRecord> out;
  for (std::uint64_t i = 0; i < n; ++i) {
    MonitoredRecord rec;
    rec.freezer = r.fixed<20>();
    rec.rule = r.str();
    rec.value = r.i64();
    rec.timestamp = r.i64();
    rec.valid = r.boolean();
    out.push_back(std::move(rec));
  }
  r.expectEnd();
  return out;
}

}  // namespace coldchain
