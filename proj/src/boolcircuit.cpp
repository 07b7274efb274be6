#include "uenc/boolcircuit.hpp"

#include <stdexcept>

namespace uenc {

void BoolCircuit::validate() const {
    if (n_inputs < 1) throw std::invalid_argument("BoolCircuit: at least one input required");
    for (size_t g = 0; g < gates.size(); ++g) {
        int defined = n_inputs + static_cast<int>(g);
        const auto& gate = gates[g];
        if (gate.a < 0 || gate.a >= defined)
            throw std::invalid_argument("BoolCircuit: gate reads undefined wire");
        if (gate.op != GateOp::Not && (gate.b < 0 || gate.b >= defined))
            throw std::invalid_argument("BoolCircuit: gate reads undefined wire");
    }
    for (int o : outputs)
        if (o < 0 || o >= wire_count()) throw std::invalid_argument("BoolCircuit: output wire out of range");
}

Bits BoolCircuit::eval(const Bits& inputs) const {
    if (static_cast<int>(inputs.size()) != n_inputs)
        throw std::invalid_argument("BoolCircuit::eval: input length mismatch");
    std::vector<int> w(wire_count());
    for (int i = 0; i < n_inputs; ++i) w[i] = inputs[i];
    for (size_t g = 0; g < gates.size(); ++g) {
        const auto& gate = gates[g];
        int v = 0;
        switch (gate.op) {
            case GateOp::And: v = w[gate.a] & w[gate.b]; break;
            case GateOp::Xor: v = w[gate.a] ^ w[gate.b]; break;
            case GateOp::Not: v = 1 ^ w[gate.a]; break;
        }
        w[n_inputs + g] = v;
    }
    Bits out(outputs.size());
    for (size_t i = 0; i < outputs.size(); ++i) out.set(i, w[outputs[i]]);
    return out;
}

void BoolCircuit::pad_to(int target) {
    if (target < size()) throw std::invalid_argument("BoolCircuit::pad_to: target smaller than current size");
    while (size() < target) gates.push_back({GateOp::Xor, 0, 0});
}

bool BoolCircuit::same_shape(const BoolCircuit& other) const {
    if (n_inputs != other.n_inputs || gates.size() != other.gates.size() || outputs != other.outputs) return false;
    for (size_t g = 0; g < gates.size(); ++g) {
        bool unary_a = gates[g].op == GateOp::Not;
        bool unary_b = other.gates[g].op == GateOp::Not;
        if (unary_a != unary_b) return false;
        if (gates[g].a != other.gates[g].a) return false;
        if (!unary_a && gates[g].b != other.gates[g].b) return false;
    }
    return true;
}

int BoolBuilder::gate(GateOp op, int a, int b) {
    c_.gates.push_back({op, a, b});
    return c_.wire_count() - 1;
}

int BoolBuilder::parity(const std::vector<int>& wires) {
    if (wires.empty()) throw std::invalid_argument("BoolBuilder::parity: empty wire list");
    int acc = wires[0];
    for (size_t i = 1; i < wires.size(); ++i) acc = xor_(acc, wires[i]);
    return acc;
}

}  // namespace uenc
