#pragma once

#include <cstdint>
#include <optional>

#include "uenc/bits.hpp"
#include "uenc/rng.hpp"

namespace uenc {

// Parameter block shared by the classical schemes.
struct SchemeParams {
    int lambda = 32;  // nonce / security parameter, bits
    int l_ek = 0;
    int l_dk = 0;
    int l_m = 0;   // message length, bits
    int l_ct = 0;  // = lambda + l_m for the PRF-nonce scheme
    int l_r = 0;   // encryption randomness, bits
    int a = 0;     // ancilla qubits for pure schemes

    void validate() const;
};

// Ideal keyed function. Outputs are derived deterministically from
// (domain seed, key material, input), which realizes a lazily sampled random
// table: repeated queries agree, distinct keys give independently derived
// tables. A concrete PRF can be dropped in behind the same surface.
class PrfInstance {
  public:
    PrfInstance(uint64_t domain_seed, Bits key_material, int in_len, int out_len);

    Bits eval(const Bits& x) const;

    int in_len() const { return in_len_; }
    int out_len() const { return out_len_; }
    const Bits& key_material() const { return key_; }

  private:
    uint64_t domain_;
    Bits key_;
    int in_len_;
    int out_len_;
};

struct SkeKey {
    Bits material;

    std::string to_hex() const { return material.to_hex(); }
};

// Classical ciphertext (nonce, body); total length l_ct = lambda + l_m.
struct SkeCiphertext {
    Bits nonce;
    Bits body;

    Bits concat() const {
        Bits out = nonce;
        out.append(body);
        return out;
    }
    std::string to_hex() const { return concat().to_hex(); }
};

// Reusable IND-CPA symmetric encryption: Enc(k, m) = (r, PRF_k(r) xor m) with
// a fresh lambda-bit nonce r. Under the ideal keyed function this is
// information-theoretically IND-CPA up to nonce collisions, and the
// ciphertext is exactly uniform to anyone without the key. The same
// construction already has ek = dk and pseudorandom ciphertexts, so the
// normal-form pseudorandom variant is this scheme with the flags set.
class SkeScheme {
  public:
    SkeScheme(SchemeParams params, uint64_t domain_seed, bool normal_form = true, bool pseudorandom = true);

    const SchemeParams& params() const { return params_; }
    bool normal_form() const { return normal_form_; }
    bool pseudorandom() const { return pseudorandom_; }

    SkeKey gen(RngStream& rng) const;
    SkeCiphertext enc(const SkeKey& key, const Bits& m, RngStream& rng) const;
    Bits dec(const SkeKey& key, const SkeCiphertext& ct) const;

    PrfInstance prf_for(const SkeKey& key) const;

  private:
    SchemeParams params_;
    uint64_t domain_;
    bool normal_form_;
    bool pseudorandom_;
};

// Re-encrypt-or-output-in-the-clear wrapper for schemes with imperfect
// correctness. The default schemes are perfectly correct, so the fallback
// path never fires for them; it exists as a generic adapter.
struct ClearFallbackCiphertext {
    std::optional<SkeCiphertext> ct;  // absent => message in the clear
    Bits clear;
};

class ClearFallbackSke {
  public:
    explicit ClearFallbackSke(SkeScheme inner) : inner_(std::move(inner)) {}
    SkeKey gen(RngStream& rng) const { return inner_.gen(rng); }
    ClearFallbackCiphertext enc(const SkeKey& key, const Bits& m, RngStream& rng) const;
    Bits dec(const SkeKey& key, const ClearFallbackCiphertext& ct) const;

  private:
    SkeScheme inner_;
};

}  // namespace uenc
