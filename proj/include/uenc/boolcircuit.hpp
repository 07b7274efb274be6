#pragma once

#include <string>
#include <vector>

#include "uenc/bits.hpp"

namespace uenc {

enum class GateOp { And, Xor, Not };

struct BoolGate {
    GateOp op;
    int a = 0;
    int b = 0;  // ignored for Not
};

// Acyclic boolean circuit. Wires 0..n_inputs-1 are inputs; gate g defines
// wire n_inputs + g. A gate may only read wires defined before it.
struct BoolCircuit {
    int n_inputs = 0;
    std::vector<BoolGate> gates;
    std::vector<int> outputs;

    int wire_count() const { return n_inputs + static_cast<int>(gates.size()); }
    int size() const { return static_cast<int>(gates.size()); }

    void validate() const;
    Bits eval(const Bits& inputs) const;

    // Append inert gates until the circuit has exactly `target` gates;
    // outputs are unchanged. Used to equalize sizes across circuits that the
    // garbling must make indistinguishable.
    void pad_to(int target);

    // Wiring shape (everything the garbled form reveals): inputs, gate
    // wire indices and arities, outputs — but not the gate operations.
    bool same_shape(const BoolCircuit& other) const;
};

// Small builder helpers used by the compiler circuits.
class BoolBuilder {
  public:
    explicit BoolBuilder(int n_inputs) { c_.n_inputs = n_inputs; }

    int input(int i) const { return i; }
    int gate(GateOp op, int a, int b = 0);
    int and_(int a, int b) { return gate(GateOp::And, a, b); }
    int xor_(int a, int b) { return gate(GateOp::Xor, a, b); }
    int not_(int a) { return gate(GateOp::Not, a); }
    // XOR over a list of wires; requires at least one wire.
    int parity(const std::vector<int>& wires);

    void mark_output(int wire) { c_.outputs.push_back(wire); }
    BoolCircuit take() {
        c_.validate();
        return std::move(c_);
    }

  private:
    BoolCircuit c_;
};

}  // namespace uenc
