#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "piggybank/classical.hpp"
#include "piggybank/error.hpp"

namespace piggybank::classical {
namespace {

PiggyBankKeys example1() { return keygen(503, 1039, 5); }
PiggyBankKeys example2() { return keygen(311, 401, 3); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

TEST(Keygen, ReproducesReferenceKeys) {
  const auto k1 = example1();
  EXPECT_EQ(k1.n, 522617);
  EXPECT_EQ(k1.d, 416861);
  const auto k2 = example2();
  EXPECT_EQ(k2.n, 124711);
  EXPECT_EQ(k2.d, 82667);
  const auto k3 = keygen(3, 11, 3);
  EXPECT_EQ(k3.n, 33);
  EXPECT_EQ(k3.d, 7);
}

TEST(Keygen, AgreesWithExtendedEuclid) {
  for (auto [p, q, e] : {std::tuple{503, 1039, 5}, {311, 401, 3}, {3, 11, 3}, {61, 53, 17}}) {
    const auto keys = keygen(p, q, e);
    const auto d = oracle::ext_euclid_inverse(e, (p - 1) * (q - 1));
    ASSERT_TRUE(d);
    EXPECT_EQ(keys.d, *d);
  }
}

TEST(Keygen, Errors) {
  EXPECT_EQ(code_of([] { keygen(4, 11, 3); }), ErrorCode::NonPrimeFactor);
  EXPECT_EQ(code_of([] { keygen(11, 11, 3); }), ErrorCode::NonPrimeFactor);
  EXPECT_EQ(code_of([] { keygen(3, 11, 5); }), ErrorCode::ExponentNotCoprime);
  EXPECT_EQ(code_of([] { keygen(3, 11, 1); }), ErrorCode::ExponentNotCoprime);
}

TEST(KeysFromExponents, RecoversFactors) {
  const auto k = keys_from_exponents(522617, 5, 416861);
  EXPECT_EQ(k.p, 503);
  EXPECT_EQ(k.q, 1039);
  const auto k2 = keys_from_exponents(124711, 3, 82667);
  EXPECT_EQ(k2.p, 311);
  EXPECT_EQ(k2.q, 401);
  EXPECT_THROW(keys_from_exponents(522617, 5, 416863), Error);
}

TEST(Forward, ReferenceValues) {
  EXPECT_EQ(forward(1201, example1()), 169841);
  EXPECT_EQ(forward(2101, example2()), 102786);
  EXPECT_EQ(forward(1, example1()), 1);
  EXPECT_EQ(code_of([] { forward(522617, example1()); }), ErrorCode::InputOutOfRange);
  EXPECT_EQ(code_of([] { forward(-1, example1()); }), ErrorCode::InputOutOfRange);
}

TEST(Forward, MatchesNaiveOracle) {
  const auto keys = example1();
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t x = rng.below(522617);
    EXPECT_EQ(forward(x, keys), oracle::naive_pow_mod(x, 5, 522617));
  }
}

TEST(RsaIdentity, ExhaustiveSmallModulus) {
  const auto keys = keygen(3, 11, 3);
  for (int x = 0; x < 33; ++x) EXPECT_EQ(inverse(forward(x, keys), keys), x);
}

TEST(RsaIdentity, RandomSpotChecks) {
  Rng rng(23);
  for (const auto& keys : {example1(), example2()}) {
    const auto n = keys.n.convert_to<std::uint64_t>();
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t x = rng.below(n);
      const std::uint64_t y = oracle::pow_mod(x, keys.e.convert_to<std::uint64_t>(), n);
      EXPECT_EQ(oracle::pow_mod(y, keys.d.convert_to<std::uint64_t>(), n), x);
      EXPECT_EQ(inverse(forward(x, keys), keys), x);
    }
  }
}

TEST(AliceEncode, ReferenceValues) {
  const auto k1 = example1();
  const auto m1 = alice_encode(169841, 11925, ExplicitHash{5}, k1.n, k1.e, false);
  EXPECT_EQ(m1.C, 861130);
  EXPECT_EQ(m1.fK, 3125);
  EXPECT_FALSE(m1.reduced);

  const auto k2 = example2();
  const auto m2 = alice_encode(102786, 9278, ExplicitHash{8}, k2.n, k2.e, false);
  EXPECT_EQ(m2.C, 831566);
  EXPECT_EQ(m2.fK, 512);

  const auto r1 = alice_encode(169841, 11925, ExplicitHash{5}, k1.n, k1.e, true);
  EXPECT_EQ(r1.C, 861130 % 522617);
  EXPECT_EQ(r1.C, 338513);
  EXPECT_EQ(r1.fK, 3125);
}

TEST(AliceEncode, Errors) {
  const auto k = example1();
  EXPECT_EQ(code_of([&] { alice_encode(1, 522617, ExplicitHash{5}, k.n, k.e, true); }),
            ErrorCode::SecretOutOfRange);
  EXPECT_EQ(code_of([&] { alice_encode(1, 5, ExplicitHash{0}, k.n, k.e, true); }),
            ErrorCode::HashOutOfRange);
  EXPECT_EQ(code_of([&] { alice_encode(1, 5, ExplicitHash{522617}, k.n, k.e, true); }),
            ErrorCode::HashOutOfRange);
}

TEST(ModularHash, StaysInRange) {
  EXPECT_EQ(apply_hash(ModularHash{251}, 11925, 522617), 11925 % 251 + 2);
  EXPECT_EQ(apply_hash(ModularHash{251}, 0, 522617), 2);
  EXPECT_EQ(code_of([] { apply_hash(ModularHash{251}, 250, 33); }), ErrorCode::HashOutOfRange);
}

TEST(BobRecover, ReferenceValues) {
  const auto r1 = bob_recover({861130, 3125, false}, 169841, example1());
  EXPECT_EQ(r1.K, 5);
  EXPECT_EQ(r1.S, 11925);
  const auto r2 = bob_recover({831566, 512, false}, 102786, example2());
  EXPECT_EQ(r2.K, 8);
  EXPECT_EQ(r2.S, 9278);
}

TEST(BobRecover, IdentityMultiplierZeroSecret) {
  const auto keys = example1();
  for (int fR : {0, 1, 169841, 522616}) {
    const auto msg = alice_encode(fR, 0, ExplicitHash{1}, keys.n, keys.e, false);
    EXPECT_EQ(msg.C, fR);
    const auto r = bob_recover(msg, fR, keys);
    EXPECT_EQ(r.K, 1);
    EXPECT_EQ(r.S, 0);
  }
}

TEST(BobRecover, TamperedCiphertextIsRejected) {
  EXPECT_EQ(code_of([] { bob_recover({861130 + 522617, 3125, false}, 169841, example1()); }),
            ErrorCode::RecoveryMismatch);
  EXPECT_EQ(code_of([] { bob_recover({100, 3125, false}, 169841, example1()); }),
            ErrorCode::RecoveryMismatch);
}

TEST(Session, ReferenceCasesEndToEnd) {
  Rng rng(0);
  const auto t1 = run_classical_session(example1(), BigInt(1201), 11925, ExplicitHash{5}, false, rng);
  EXPECT_EQ(t1.fR, 169841);
  EXPECT_EQ(t1.C, 861130);
  EXPECT_EQ(t1.fK, 3125);
  EXPECT_EQ(t1.recovered_K, 5);
  EXPECT_EQ(t1.recovered_S, 11925);

  const auto t2 = run_classical_session(example2(), BigInt(2101), 9278, ExplicitHash{8}, false, rng);
  EXPECT_EQ(t2.recovered_S, 9278);
}

TEST(Session, RandomRIsSeeded) {
  Rng a(5), b(5);
  const auto t1 = run_classical_session(example1(), std::nullopt, 77, ModularHash{}, true, a);
  const auto t2 = run_classical_session(example1(), std::nullopt, 77, ModularHash{}, true, b);
  EXPECT_EQ(t1.R, t2.R);
  EXPECT_LT(t1.R, 522617);
  EXPECT_EQ(t1.recovered_S, 77);
}

TEST(Session, ExhaustiveSmallModulusBothModes) {
  const auto keys = keygen(3, 11, 3);
  Rng rng(0);
  for (const bool reduce : {false, true}) {
    for (int R = 0; R < 33; ++R) {
      for (int K = 1; K < 33; ++K) {
        for (int S = 0; S < 33; ++S) {
          const auto t = run_classical_session(keys, BigInt(R), S, ExplicitHash{K}, reduce, rng);
          ASSERT_EQ(t.recovered_K, K);
          ASSERT_EQ(t.recovered_S, S);
        }
      }
    }
  }
}

TEST(Session, LargeModulusBeyond64Bits) {
  // Two ~64-bit primes: n, d and the intermediate products exceed 64 bits.
  const BigInt p("18446744073709551557");
  const BigInt q("18446744073709551533");
  const auto keys = keygen(p, q, 65537);
  Rng rng(1);
  const auto t = run_classical_session(keys, std::nullopt, BigInt("123456789012345678901234567890"),
                                       ModularHash{}, true, rng);
  EXPECT_EQ(t.recovered_S, BigInt("123456789012345678901234567890"));
}

}  // namespace
}  // namespace piggybank::classical
