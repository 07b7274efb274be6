#pragma once

#include "uenc/qstate.hpp"

namespace uenc {

// Candidate one-time uncloneable bit: conjugate coding with a parity pad.
// ek = dk = (theta, s). Enc(b) samples x with parity(x) = b xor parity(s)
// and outputs H^theta |x>. Security of this instantiation is conjectural;
// the scheme exists so the games have a candidate to attack. Setting
// `classical` freezes theta = 0^n, which yields a computational-basis
// (trivially cloneable) control scheme with the same circuit shape.
struct UcbitKey {
    Bits theta;
    Bits s;

    Bits concat() const {
        Bits out = theta;
        out.append(s);
        return out;
    }
    static UcbitKey split(const Bits& dk) {
        size_t n = dk.size() / 2;
        return {dk.slice(0, n), dk.slice(n, n)};
    }
};

class UcbitScheme {
  public:
    explicit UcbitScheme(int n, bool classical = false);

    int n() const { return n_; }
    bool classical() const { return classical_; }
    int l_dk() const { return 2 * n_; }  // theta || s
    int l_ct_qubits() const { return n_; }
    int l_r() const { return n_ - 1 >= 0 ? n_ - 1 : 0; }

    UcbitKey gen(RngStream& rng) const;

    // Pure encryption sample; registers C0..C{n-1}. The sampled x is the
    // scheme's encryption randomness.
    struct EncSample {
        PureState state;
        Bits x;
    };
    EncSample enc(const UcbitKey& key, int b, RngStream& rng) const;

    // Channel view: uniform mixture over admissible x.
    DensityMatrix enc_channel(const UcbitKey& key, int b) const;

    // Honest decryption: rotate by H^theta, measure, parity-correct.
    int dec(const UcbitKey& key, const PureState& ct, RngStream& rng) const;
    // Exact probability that dec outputs b on the given ciphertext state.
    double dec_success_probability(const UcbitKey& key, const DensityMatrix& ct, int b) const;

    // Deterministic x for a given (b, r) pair: x = (r, b ^ parity(s) ^
    // parity(r)); used by the pure-scheme form Enc(m; r).
    Bits x_from_randomness(const UcbitKey& key, int b, const Bits& r) const;
    PureState state_for_x(const UcbitKey& key, const Bits& x) const;

    std::vector<std::string> ct_registers() const;

  private:
    int n_;
    bool classical_;
};

}  // namespace uenc
