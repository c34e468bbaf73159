#include "piggybank/classical.hpp"

#include <boost/integer/common_factor_rt.hpp>
#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "piggybank/error.hpp"

namespace piggybank::classical {

namespace mp = boost::multiprecision;

namespace {

bool is_prime(const BigInt& x) {
  if (x < 2) return false;
  return mp::miller_rabin_test(x, 32);
}

void require_in_range(const BigInt& x, const BigInt& n, ErrorCode code, const char* what) {
  if (x < 0 || x >= n) {
    throw Error(code, std::string(what) + " must lie in [0, n), got " + x.str());
  }
}

}  // namespace

PiggyBankKeys keygen(const BigInt& p, const BigInt& q, const BigInt& e) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrimeFactor, "p = " + p.str() + " is not prime");
  if (!is_prime(q)) throw Error(ErrorCode::NonPrimeFactor, "q = " + q.str() + " is not prime");
  if (p == q) throw Error(ErrorCode::NonPrimeFactor, "p and q must be distinct");

  const BigInt phi = (p - 1) * (q - 1);
  if (e <= 1 || e >= phi || boost::integer::gcd(e, phi) != 1) {
    throw Error(ErrorCode::ExponentNotCoprime,
                "e = " + e.str() + " is not a unit modulo (p-1)(q-1) = " + phi.str());
  }
  const BigInt d = boost::integer::mod_inverse(e, phi);
  return PiggyBankKeys{p * q, e, d, p, q};
}

PiggyBankKeys keys_from_exponents(const BigInt& n, const BigInt& e, const BigInt& d) {
  if (n < 6 || e <= 1 || d <= 1) {
    throw Error(ErrorCode::InvalidArgument, "need n >= 6 and e, d > 1");
  }
  // e*d - 1 is a multiple of phi(n). Write it as 2^t * r and look for a
  // nontrivial square root of 1 among g^(r 2^i); gcd(root - 1, n) splits n.
  BigInt r = e * d - 1;
  unsigned t = 0;
  while ((r & 1) == 0) {
    r >>= 1;
    ++t;
  }
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "e*d - 1 is odd; not an RSA exponent pair");

  std::optional<BigInt> factor;
  for (unsigned g = 2; g < 1000 && !factor; ++g) {
    const BigInt base(g);
    if (base >= n) break;
    if (const BigInt common = boost::integer::gcd(base, n); common != 1) {
      factor = common;
      break;
    }
    BigInt x = mp::powm(base, r, n);
    if (x == 1 || x == n - 1) continue;
    for (unsigned i = 0; i < t; ++i) {
      const BigInt y = (x * x) % n;
      if (y == 1) {
        factor = boost::integer::gcd(BigInt(x - 1), n);
        break;
      }
      if (y == n - 1) break;
      x = y;
    }
  }
  if (!factor || *factor == 1 || *factor == n) {
    throw Error(ErrorCode::InvalidArgument, "could not factor n from (e, d)");
  }

  BigInt p = *factor;
  BigInt q = n / p;
  if (p > q) std::swap(p, q);
  PiggyBankKeys keys = keygen(p, q, e);
  if ((e * d) % keys.totient() != 1) {
    throw Error(ErrorCode::InvalidArgument, "e*d is not 1 modulo (p-1)(q-1)");
  }
  keys.d = d;
  return keys;
}

BigInt forward(const BigInt& x, const PiggyBankKeys& keys) {
  require_in_range(x, keys.n, ErrorCode::InputOutOfRange, "input");
  return mp::powm(x, keys.e, keys.n);
}

BigInt inverse(const BigInt& y, const PiggyBankKeys& keys) {
  require_in_range(y, keys.n, ErrorCode::InputOutOfRange, "input");
  return mp::powm(y, keys.d, keys.n);
}

BigInt apply_hash(const HashSpec& hash, const BigInt& secret, const BigInt& n) {
  const BigInt K = std::visit(
      [&](const auto& h) -> BigInt {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, ExplicitHash>) {
          return h.K;
        } else {
          if (h.prime < 2) throw Error(ErrorCode::InvalidArgument, "hash prime must be >= 2");
          return secret % BigInt(h.prime) + 2;
        }
      },
      hash);
  if (K < 1 || K >= n) {
    throw Error(ErrorCode::HashOutOfRange, "h(S) = " + K.str() + " must lie in [1, n)");
  }
  return K;
}

ClassicalMessage alice_encode(const BigInt& fR, const BigInt& secret, const HashSpec& hash,
                              const BigInt& n, const BigInt& e, bool reduce) {
  require_in_range(secret, n, ErrorCode::SecretOutOfRange, "secret");
  require_in_range(fR, n, ErrorCode::InputOutOfRange, "f(R)");
  const BigInt K = apply_hash(hash, secret, n);

  ClassicalMessage msg;
  msg.C = K * fR + secret;
  if (reduce) msg.C %= n;
  msg.fK = mp::powm(K, e, n);
  msg.reduced = reduce;
  return msg;
}

Recovered bob_recover(const ClassicalMessage& msg, const BigInt& fR, const PiggyBankKeys& keys) {
  require_in_range(msg.fK, keys.n, ErrorCode::InputOutOfRange, "f(K)");
  require_in_range(fR, keys.n, ErrorCode::InputOutOfRange, "f(R)");
  if (msg.C < 0 || (msg.reduced && msg.C >= keys.n)) {
    throw Error(ErrorCode::InputOutOfRange, "C out of range for reduced message");
  }

  Recovered out;
  out.K = mp::powm(msg.fK, keys.d, keys.n);
  if (msg.reduced) {
    BigInt s = (msg.C - out.K * fR) % keys.n;
    if (s < 0) s += keys.n;
    out.S = s;
  } else {
    out.S = msg.C - out.K * fR;
    if (out.S < 0 || out.S >= keys.n) {
      throw Error(ErrorCode::RecoveryMismatch,
                  "C - K f(R) = " + out.S.str() + " is outside [0, n)");
    }
  }
  return out;
}

ClassicalTranscript run_classical_session(const PiggyBankKeys& keys, std::optional<BigInt> R,
                                          const BigInt& secret, const HashSpec& hash, bool reduce,
                                          Rng& rng) {
  ClassicalTranscript t;
  t.n = keys.n;
  t.e = keys.e;
  if (R) {
    t.R = *R;
  } else {
    // n may exceed 64 bits; draw 32-bit limbs and reduce. The bias is
    // irrelevant for a simulator.
    BigInt r = 0;
    const auto limbs = mp::msb(keys.n) / 32 + 2;
    for (std::size_t i = 0; i < limbs; ++i) {
      r = (r << 32) | BigInt(static_cast<std::uint32_t>(rng.engine()()));
    }
    t.R = r % keys.n;
  }
  t.fR = forward(t.R, keys);
  t.S = secret;
  t.K = apply_hash(hash, secret, keys.n);

  const ClassicalMessage msg = alice_encode(t.fR, secret, hash, keys.n, keys.e, reduce);
  t.C = msg.C;
  t.fK = msg.fK;
  t.reduced = msg.reduced;

  const Recovered rec = bob_recover(msg, t.fR, keys);
  t.recovered_K = rec.K;
  t.recovered_S = rec.S;
  if (rec.K != t.K || rec.S != t.S) {
    throw Error(ErrorCode::RecoveryMismatch, "recovered (K, S) = (" + rec.K.str() + ", " +
                                                 rec.S.str() + ") differs from what was sent");
  }
  return t;
}

}  // namespace piggybank::classical
