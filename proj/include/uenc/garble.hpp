#pragma once

#include <optional>
#include <vector>

#include "uenc/boolcircuit.hpp"
#include "uenc/common.hpp"
#include "uenc/rng.hpp"
#include "uenc/symcrypto.hpp"

namespace uenc {

// Yao point-and-permute garbling; rows are double-encrypted with the
// PRF-nonce SKE from symcrypto, one encryption per input label.

struct GarbleParams {
    int label_bits = 32;
    int nonce_bits = 32;
    int tag_bits = 16;  // zero tag inside each row; failed check = tampering

    int payload_bits() const { return label_bits + 1 + tag_bits; }
    int inner_ct_bits() const { return nonce_bits + payload_bits(); }
    int outer_ct_bits() const { return nonce_bits + inner_ct_bits(); }
};

struct GcLabel {
    Bits key;  // label_bits
    int ptr = 0;

    bool operator==(const GcLabel& o) const { return key == o.key && ptr == o.ptr; }
    Bits serialize() const {
        Bits out = key;
        out.push_back(ptr);
        return out;
    }
    static GcLabel deserialize(const Bits& b) {
        GcLabel l;
        l.key = b.slice(0, b.size() - 1);
        l.ptr = b[b.size() - 1];
        return l;
    }
};

struct WirePair {
    GcLabel l0, l1;
    const GcLabel& for_bit(int b) const { return b ? l1 : l0; }
    int perm() const { return l0.ptr; }
};

// What the garbled form of a circuit reveals: wiring and arities, not ops.
struct CircuitShape {
    int n_inputs = 0;
    struct GateWires {
        int a = 0;
        std::optional<int> b;  // absent for unary gates
    };
    std::vector<GateWires> gates;
    std::vector<int> outputs;

    int wire_count() const { return n_inputs + static_cast<int>(gates.size()); }
    bool operator==(const CircuitShape& o) const;
};

CircuitShape shape_of(const BoolCircuit& c);

struct GarbledCircuit {
    GarbleParams params;
    CircuitShape shape;
    // Binary gates hold 4 rows indexed ptr_a*2 + ptr_b; unary gates hold 2.
    std::vector<std::vector<Bits>> gate_rows;
    std::vector<int> output_perms;  // decoded bit = out label ptr ^ perm
};

// The garbling randomness r: both labels of every wire.
struct GarbleRandomness {
    std::vector<WirePair> wires;
};

struct GarbledEncoding {
    GarbledCircuit gc;
    GarbleRandomness r;
};

GarbledEncoding dre_garble(const BoolCircuit& c, const GarbleParams& params, RngStream& rng);

GcLabel dre_label(const GarbleRandomness& r, int wire, int bit);

// Evaluate from input labels; throws GarbleError when a row's integrity tag
// fails (malformed or mismatched labels).
Bits dre_eval(const GarbledCircuit& gc, const std::vector<GcLabel>& input_labels);
// Variant that also exposes internal labels (used by the quantum layer).
Bits dre_eval_full(const GarbledCircuit& gc, const std::vector<GcLabel>& input_labels,
                   std::vector<GcLabel>* all_labels);

// Simulator: given only the circuit shape and the output, produce a garbled
// circuit and input labels that evaluate to y and are distributed like the
// real ones to anyone without the randomness r.
struct SimulatedEncoding {
    GarbledCircuit gc;
    std::vector<GcLabel> input_labels;
};
SimulatedEncoding dre_simulate(const CircuitShape& shape, const GarbleParams& params, const Bits& y, RngStream& rng);

}  // namespace uenc
