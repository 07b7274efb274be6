#include "uenc/garble.hpp"

namespace uenc {

namespace {

constexpr uint64_t kGarbleDomain = 0x6761726253334bull;

SkeScheme row_ske(const GarbleParams& p, int payload_bits) {
    SchemeParams sp;
    sp.lambda = p.nonce_bits;
    sp.l_m = payload_bits;
    sp.l_ct = sp.lambda + sp.l_m;
    sp.l_ek = sp.l_dk = p.label_bits;
    return SkeScheme(sp, kGarbleDomain);
}

Bits encrypt_row(const GarbleParams& p, const GcLabel& ka, const GcLabel& kb, const GcLabel& out, RngStream& rng) {
    Bits payload = out.serialize();
    payload.append(Bits(p.tag_bits));
    SkeScheme inner = row_ske(p, p.payload_bits());
    Bits inner_ct = inner.enc(SkeKey{kb.key}, payload, rng).concat();
    SkeScheme outer = row_ske(p, p.inner_ct_bits());
    return outer.enc(SkeKey{ka.key}, inner_ct, rng).concat();
}

Bits encrypt_row_unary(const GarbleParams& p, const GcLabel& ka, const GcLabel& out, RngStream& rng) {
    Bits payload = out.serialize();
    payload.append(Bits(p.tag_bits));
    SkeScheme inner = row_ske(p, p.payload_bits());
    return inner.enc(SkeKey{ka.key}, payload, rng).concat();
}

GcLabel decrypt_payload(const GarbleParams& p, const Bits& payload) {
    Bits tag = payload.slice(p.label_bits + 1, p.tag_bits);
    if (tag != Bits(p.tag_bits)) throw GarbleError("garbled row integrity check failed");
    return GcLabel::deserialize(payload.slice(0, p.label_bits + 1));
}

Bits ske_dec_bits(const GarbleParams& p, const GcLabel& key, const Bits& ct, int payload_bits) {
    SkeScheme s = row_ske(p, payload_bits);
    SkeCiphertext c{ct.slice(0, p.nonce_bits), ct.slice(p.nonce_bits, payload_bits)};
    return s.dec(SkeKey{key.key}, c);
}

GcLabel random_label(const GarbleParams& p, RngStream& rng, int ptr) {
    return GcLabel{Bits::random(rng, p.label_bits), ptr};
}

}  // namespace

bool CircuitShape::operator==(const CircuitShape& o) const {
    if (n_inputs != o.n_inputs || outputs != o.outputs || gates.size() != o.gates.size()) return false;
    for (size_t g = 0; g < gates.size(); ++g)
        if (gates[g].a != o.gates[g].a || gates[g].b != o.gates[g].b) return false;
    return true;
}

CircuitShape shape_of(const BoolCircuit& c) {
    CircuitShape s;
    s.n_inputs = c.n_inputs;
    s.outputs = c.outputs;
    for (const auto& g : c.gates) {
        CircuitShape::GateWires w;
        w.a = g.a;
        if (g.op != GateOp::Not) w.b = g.b;
        s.gates.push_back(w);
    }
    return s;
}

GarbledEncoding dre_garble(const BoolCircuit& c, const GarbleParams& params, RngStream& rng) {
    c.validate();
    GarbledEncoding enc;
    enc.gc.params = params;
    enc.gc.shape = shape_of(c);
    enc.r.wires.resize(c.wire_count());
    for (int w = 0; w < c.wire_count(); ++w) {
        int perm = rng.bit();
        enc.r.wires[w].l0 = random_label(params, rng, perm);
        enc.r.wires[w].l1 = random_label(params, rng, perm ^ 1);
    }

    enc.gc.gate_rows.resize(c.gates.size());
    for (size_t g = 0; g < c.gates.size(); ++g) {
        const auto& gate = c.gates[g];
        int out_wire = c.n_inputs + static_cast<int>(g);
        if (gate.op == GateOp::Not) {
            enc.gc.gate_rows[g].resize(2);
            for (int va = 0; va < 2; ++va) {
                const GcLabel& la = enc.r.wires[gate.a].for_bit(va);
                const GcLabel& lo = enc.r.wires[out_wire].for_bit(1 ^ va);
                enc.gc.gate_rows[g][la.ptr] = encrypt_row_unary(params, la, lo, rng);
            }
        } else {
            enc.gc.gate_rows[g].resize(4);
            for (int va = 0; va < 2; ++va)
                for (int vb = 0; vb < 2; ++vb) {
                    int v = gate.op == GateOp::And ? (va & vb) : (va ^ vb);
                    const GcLabel& la = enc.r.wires[gate.a].for_bit(va);
                    const GcLabel& lb = enc.r.wires[gate.b].for_bit(vb);
                    const GcLabel& lo = enc.r.wires[out_wire].for_bit(v);
                    enc.gc.gate_rows[g][la.ptr * 2 + lb.ptr] = encrypt_row(params, la, lb, lo, rng);
                }
        }
    }

    for (int o : c.outputs) enc.gc.output_perms.push_back(enc.r.wires[o].perm());
    return enc;
}

GcLabel dre_label(const GarbleRandomness& r, int wire, int bit) {
    return r.wires.at(wire).for_bit(bit);
}

Bits dre_eval_full(const GarbledCircuit& gc, const std::vector<GcLabel>& input_labels,
                   std::vector<GcLabel>* all_labels) {
    if (static_cast<int>(input_labels.size()) != gc.shape.n_inputs)
        throw std::invalid_argument("dre_eval: wrong number of input labels");
    std::vector<GcLabel> wire(gc.shape.wire_count());
    for (int i = 0; i < gc.shape.n_inputs; ++i) wire[i] = input_labels[i];
    const auto& p = gc.params;
    for (size_t g = 0; g < gc.shape.gates.size(); ++g) {
        const auto& gw = gc.shape.gates[g];
        const GcLabel& la = wire[gw.a];
        Bits payload;
        if (!gw.b) {
            payload = ske_dec_bits(p, la, gc.gate_rows[g][la.ptr], p.payload_bits());
        } else {
            const GcLabel& lb = wire[*gw.b];
            Bits inner = ske_dec_bits(p, la, gc.gate_rows[g][la.ptr * 2 + lb.ptr], p.inner_ct_bits());
            payload = ske_dec_bits(p, lb, inner, p.payload_bits());
        }
        wire[gc.shape.n_inputs + g] = decrypt_payload(p, payload);
    }
    Bits out(gc.shape.outputs.size());
    for (size_t i = 0; i < gc.shape.outputs.size(); ++i)
        out.set(i, wire[gc.shape.outputs[i]].ptr ^ gc.output_perms[i]);
    if (all_labels) *all_labels = std::move(wire);
    return out;
}

Bits dre_eval(const GarbledCircuit& gc, const std::vector<GcLabel>& input_labels) {
    return dre_eval_full(gc, input_labels, nullptr);
}

SimulatedEncoding dre_simulate(const CircuitShape& shape, const GarbleParams& params, const Bits& y, RngStream& rng) {
    if (y.size() != shape.outputs.size()) throw std::invalid_argument("dre_simulate: output length mismatch");
    SimulatedEncoding sim;
    sim.gc.params = params;
    sim.gc.shape = shape;
    // One active label per wire; inactive rows are uniform strings, which is
    // how real rows look without their keys under the ideal PRF.
    std::vector<GcLabel> active(shape.wire_count());
    for (int w = 0; w < shape.wire_count(); ++w) active[w] = random_label(params, rng, rng.bit());

    sim.gc.gate_rows.resize(shape.gates.size());
    for (size_t g = 0; g < shape.gates.size(); ++g) {
        const auto& gw = shape.gates[g];
        int out_wire = shape.n_inputs + static_cast<int>(g);
        if (!gw.b) {
            sim.gc.gate_rows[g].resize(2);
            for (int row = 0; row < 2; ++row)
                sim.gc.gate_rows[g][row] = (row == active[gw.a].ptr)
                                               ? encrypt_row_unary(params, active[gw.a], active[out_wire], rng)
                                               : Bits::random(rng, params.inner_ct_bits());
        } else {
            sim.gc.gate_rows[g].resize(4);
            int live = active[gw.a].ptr * 2 + active[*gw.b].ptr;
            for (int row = 0; row < 4; ++row)
                sim.gc.gate_rows[g][row] = (row == live)
                                               ? encrypt_row(params, active[gw.a], active[*gw.b], active[out_wire], rng)
                                               : Bits::random(rng, params.outer_ct_bits());
        }
    }

    for (size_t i = 0; i < shape.outputs.size(); ++i)
        sim.gc.output_perms.push_back(active[shape.outputs[i]].ptr ^ y[i]);
    for (int i = 0; i < shape.n_inputs; ++i) sim.input_labels.push_back(active[i]);
    return sim;
}

}  // namespace uenc
