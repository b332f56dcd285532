/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <set>
#include <string>

#include "coldchain/codec.hpp"
#include "coldchain/keccak.hpp"
#include "coldchain/keys.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace coldchain;

namespace {

// Reference digests produced by an independent Keccak-256 implementation
// (pycryptodome, original padding) over the same inputs.
struct Vector {
  std::string input;
  const char *digest;
};

std::vector<Vector> referenceVectors() {
  std::string pattern;
  for (int i = 0; i < 1000; ++i) pattern.push_back(static_cast<char>(i % 251));
  return {
      {"", "0xc5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470"},
      {"abc",
       "0x4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45"},
      {"The quick brown fox jumps over the lazy dog",
       "0x4d741b6f1eb29cb2a9b9911c82f56fa8d73b04959d3d9d222895df6c0b28aa15"},
      {std::string(135, 'a'),
       "0x34367dc248bbd832f4e3e69dfaac2f92638bd0bbd18f2912ba4ef454919cf446"},
      {std::string(136, 'a'),
       "0xa6c4d403279fe3e0af03729caada8374b5ca54d8065329a3ebcaeb4b60aa386e"},
      {std::string(137, 'a'),
       "0xd869f639c7046b4929fc92a4d988a8b22c55fbadb802c0c66ebcd484f1915f39"},
      {std::string(272, 'a'),
       "0xcf7fcd4f705ee749930d19ca84561a9bf62516bd90a471545fa2f49fdc7e63c8"},
      {pattern,
       "0xaf692982e84a5a9688359025660a7857cd28ee7c8d867cfa1677baf2e6d1f63b"},
  };
}

}  // namespace

TEST_CASE("hex round trip and strictness") {
  Bytes b = {0x00, 0xab, 0xff};
  CHECK(toPrefixedHex(b) == "0x00abff");
  CHECK(fromHex("0x00ABff") == b);
  CHECK(fromHex("00abff") == b);
  CHECK_THROWS_AS(fromHex("0x0"), ParseError);
  CHECK_THROWS_AS(fromHex("0xzz"), ParseError);
  CHECK(fromCanonicalHex("0x00abff") == b);
  CHECK_THROWS_AS(fromCanonicalHex("0x00ABFF"), ParseError);
  CHECK_THROWS_AS(fromCanonicalHex("00abff"), ParseError);
  CHECK_THROWS_AS(Address::fromHex("0x00"), ParseError);
}

TEST_CASE("codec is length-prefixed and big-endian") {
  Writer w;
  w.str("ab").u64(1).i64(-1).boolean(true);
  // Every field, integers included, carries a 4-byte length prefix.
  const Bytes expected = {0, 0, 0, 2, 'a', 'b',
                          0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 1,
                          0, 0, 0, 8, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
                          0, 0, 0, 1, 1};
  CHECK(w.data() == expected);

  Reader r(expected);
  CHECK(r.str() == "ab");
  CHECK(r.u64() == 1);
  CHECK(r.i64() == -1);
  CHECK(r.boolean());
  CHECK(r.done());
  r.expectEnd();

  Reader truncated(ByteView(expected).first(5));
  CHECK_THROWS_AS(truncated.str(), ParseError);
}

TEST_CASE("keccak256 matches reference vectors") {
  for (const auto &v : referenceVectors()) {
    CAPTURE(v.input.size());
    CHECK(keccak256(v.input).hex() == v.digest);
  }
}

TEST_CASE("incremental keccak equals one-shot across rate boundaries") {
  const std::string data(1000, 'x');
  for (std::size_t split : {0, 1, 135, 136, 137, 500, 999, 1000}) {
    Keccak256 h;
    h.update(std::string_view(data).substr(0, split));
    h.update(std::string_view(data).substr(split));
    CHECK(h.finalize() == keccak256(data));
  }
}

TEST_CASE("identity hashes use UTF-8 with no terminator") {
  CHECK(keccak256("20-10563145-8").hex() ==
        "0xa3f6550e5420ddda304a6b22772eb70b48ada3c7eb14648e321bb65387c8cfab");
  CHECK(keccak256("my-super-secret").hex() ==
        "0x820371900007448f4a8d909327870ece84168bf90f1de8dddc0b6c7473c44b40");
}

TEST_CASE("address is the last 20 bytes of keccak256(public key)") {
  Keypair kp = Keypair::fromLabel("addr");
  Hash32 h = keccak256(kp.publicKey().view());
  CHECK(kp.address() == Address::fromSpan(h.view().subspan(12)));
  CHECK(deriveAddress(kp.publicKey()) == kp.address());
}

TEST_CASE("1000 generated keys give 1000 distinct addresses") {
  std::set<Address> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(Keypair::generate().address());
  CHECK(seen.size() == 1000);
}

TEST_CASE("label keys are deterministic and distinct") {
  CHECK(Keypair::fromLabel("a").address() == Keypair::fromLabel("a").address());
  CHECK(Keypair::fromLabel("a").address() != Keypair::fromLabel("b").address());
}

TEST_CASE("signatures verify and detect tampering") {
  Keypair kp = Keypair::fromLabel("signer");
  const Bytes msg = toBytes("payload");
  Signature sig = kp.sign(msg);
  CHECK(verifySignature(kp.publicKey(), msg, sig));

  Bytes altered = msg;
  altered[0] ^= 1;
  CHECK_FALSE(verifySignature(kp.publicKey(), altered, sig));

  Signature bad = sig;
  bad.data()[10] ^= 0x40;
  CHECK_FALSE(verifySignature(kp.publicKey(), msg, bad));

  CHECK_FALSE(verifySignature(Keypair::fromLabel("other").publicKey(), msg, sig));
}

TEST_CASE("keypair file round trip") {
  auto dir = testing::tempDir("keys");
  Keypair kp = Keypair::generate();
  kp.save(dir / "k.json");
  Keypair back = Keypair::load(dir / "k.json");
  CHECK(back.address() == kp.address());
  CHECK(back.publicKey() == kp.publicKey());
  std::filesystem::remove_all(dir);
}

TEST_CASE("invalid public key is rejected") {
  PublicKey zero;
  CHECK_THROWS_AS(deriveAddress(zero), ParseError);
}
