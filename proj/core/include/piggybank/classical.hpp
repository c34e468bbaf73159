#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "piggybank/random.hpp"

namespace piggybank::classical {

using BigInt = boost::multiprecision::cpp_int;

/// RSA-style key material for the one-way transformation f(x) = x^e mod n.
struct PiggyBankKeys {
  BigInt n;
  BigInt e;
  BigInt d;
  BigInt p;
  BigInt q;

  BigInt totient() const { return (p - 1) * (q - 1); }
};

/// Builds keys from two distinct primes and a public exponent.
/// Throws NonPrimeFactor or ExponentNotCoprime.
PiggyBankKeys keygen(const BigInt& p, const BigInt& q, const BigInt& e);

/// Builds keys from a given (n, e, d), recovering the factors of n from
/// the known secret exponent. Throws InvalidArgument when (e, d) is not a
/// valid exponent pair for n.
PiggyBankKeys keys_from_exponents(const BigInt& n, const BigInt& e, const BigInt& d);

/// x^e mod n. Throws InputOutOfRange unless 0 <= x < n.
BigInt forward(const BigInt& x, const PiggyBankKeys& keys);

/// x^d mod n. Throws InputOutOfRange unless 0 <= x < n.
BigInt inverse(const BigInt& y, const PiggyBankKeys& keys);

struct ExplicitHash {
  BigInt K;
};

/// K = (S mod prime) + 2.
struct ModularHash {
  std::uint64_t prime = 251;
};

using HashSpec = std::variant<ExplicitHash, ModularHash>;

/// Evaluates h(S). Throws HashOutOfRange unless 1 <= K < n.
BigInt apply_hash(const HashSpec& hash, const BigInt& secret, const BigInt& n);

struct ClassicalMessage {
  BigInt C;   ///< K * f(R) + S, reduced mod n iff `reduced`
  BigInt fK;  ///< K^e mod n, sent in a separate communication
  bool reduced = true;
};

/// Alice's combine step. Only the public part of the keys is used.
/// Throws SecretOutOfRange, HashOutOfRange, InputOutOfRange.
ClassicalMessage alice_encode(const BigInt& fR, const BigInt& secret, const HashSpec& hash,
                              const BigInt& n, const BigInt& e, bool reduce);

struct Recovered {
  BigInt K;
  BigInt S;
};

/// Bob's two-part recovery: K from fK with the secret exponent, then S from C.
/// Throws RecoveryMismatch when the unreduced remainder is not in [0, n).
Recovered bob_recover(const ClassicalMessage& msg, const BigInt& fR, const PiggyBankKeys& keys);

struct ClassicalTranscript {
  BigInt n;
  BigInt e;
  BigInt R;
  BigInt fR;
  BigInt K;
  BigInt S;
  BigInt C;
  BigInt fK;
  BigInt recovered_K;
  BigInt recovered_S;
  bool reduced = true;
};

/// Runs forward -> alice_encode -> bob_recover. When R is absent it is drawn
/// uniformly from [0, n) with `rng`. Throws RecoveryMismatch if the
/// recovered pair differs from what Alice sent.
ClassicalTranscript run_classical_session(const PiggyBankKeys& keys, std::optional<BigInt> R,
                                          const BigInt& secret, const HashSpec& hash, bool reduce,
                                          Rng& rng);

}  // namespace piggybank::classical
