#pragma once

#include "uenc/boolcircuit.hpp"
#include "uenc/qstate.hpp"

namespace uenc {

// Single-qubit Clifford with its conjugation action on the Pauli group,
// which is what the teleportation corrections need.
class CliffordGate {
  public:
    explicit CliffordGate(Mat u, std::string name = "");
    static CliffordGate identity();
    static CliffordGate h();
    static CliffordGate x();
    static CliffordGate z();
    static CliffordGate s();

    const Mat& matrix() const { return u_; }
    const std::string& name() const { return name_; }
    // X-exponent of G P G^dag for P = X, Z (phases dropped); the measurement
    // corrections are F_2-linear in these.
    int xexp_of_conj_x() const { return gx_; }
    int xexp_of_conj_z() const { return gz_; }

  private:
    Mat u_;
    std::string name_;
    int gx_ = 0, gz_ = 0;
};

// Restricted circuit class: per-qubit classically-controlled single-qubit
// Clifford, terminal computational measurement of every qubit, boolean
// postprocessing f(outcomes, classical inputs).
struct QubitSlot {
    CliffordGate g0 = CliffordGate::identity();
    CliffordGate g1 = CliffordGate::identity();
    int control = 0;  // index into the classical inputs
};

struct HybridCircuit {
    int lq = 0;
    int lc = 0;
    std::vector<QubitSlot> slots;  // size lq
    BoolCircuit post;              // arity lq + lc: (outcomes, classical bits)

    void validate() const;
    int out_count() const { return static_cast<int>(post.outputs.size()); }

    // Size descriptor: two circuits are interchangeable for the encoder iff
    // these match (register counts, controls, post wiring).
    struct Shape {
        int lq = 0, lc = 0;
        std::vector<int> controls;
        int post_gates = 0;
        int outs = 0;
        bool operator==(const Shape&) const = default;
    };
    Shape shape() const;

    static std::string input_register(int i) { return "I" + std::to_string(i); }
    static std::string output_register(int j) { return "O" + std::to_string(j); }
    std::vector<std::string> input_registers() const;
};

// Exact channel of the circuit: `state` holds registers I0..I{lq-1} plus any
// side-information registers, which pass through untouched. The result is a
// density matrix over (O0..O{k-1}, side registers).
DensityMatrix hybrid_eval_exact(const HybridCircuit& c, const PureState& state, const Bits& x);

// Born-sampled single run; returns (f output, post-measurement state on the
// side registers). Side registers must be nonempty or absent is fine.
struct HybridRunResult {
    Bits output;
    std::optional<PureState> side;
};
HybridRunResult hybrid_eval_sampled(const HybridCircuit& c, const PureState& state, const Bits& x, RngStream& rng);

// JSON (de)serialization for the circuit corpus:
// {lq, lc, slots: [{g0, g1, control}], f: {inputs, gates, outputs}}.
std::string hybrid_to_json(const HybridCircuit& c);
HybridCircuit hybrid_from_json(const std::string& text);

}  // namespace uenc
