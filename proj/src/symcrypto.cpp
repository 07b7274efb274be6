#include "uenc/symcrypto.hpp"

#include <stdexcept>

namespace uenc {

namespace {

uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

uint64_t absorb_bits(uint64_t h, const Bits& b) {
    uint64_t chunk = 0;
    int fill = 0;
    for (size_t i = 0; i < b.size(); ++i) {
        chunk |= static_cast<uint64_t>(b[i]) << fill;
        if (++fill == 64) {
            h = mix(h ^ chunk) + 0x9e3779b97f4a7c15ull;
            chunk = 0;
            fill = 0;
        }
    }
    // Length-extension guard: always absorb the tail with the bit count.
    h = mix(h ^ chunk) + 0x9e3779b97f4a7c15ull;
    h = mix(h ^ (static_cast<uint64_t>(b.size()) * 0xd1b54a32d192ed03ull));
    return h;
}

}  // namespace

void SchemeParams::validate() const {
    if (lambda < 1 || l_m < 1) throw std::invalid_argument("SchemeParams: lengths must be >= 1");
    if (l_ct != lambda + l_m) throw std::invalid_argument("SchemeParams: l_ct must equal lambda + l_m");
    if (l_ek < 1 || l_dk < 1) throw std::invalid_argument("SchemeParams: key lengths must be >= 1");
}

PrfInstance::PrfInstance(uint64_t domain_seed, Bits key_material, int in_len, int out_len)
    : domain_(domain_seed), key_(std::move(key_material)), in_len_(in_len), out_len_(out_len) {
    if (in_len_ < 0 || out_len_ < 1) throw std::invalid_argument("PrfInstance: bad lengths");
}

Bits PrfInstance::eval(const Bits& x) const {
    if (static_cast<int>(x.size()) != in_len_) throw std::invalid_argument("PrfInstance: input length mismatch");
    uint64_t h = mix(domain_ ^ 0xa0761d6478bd642full);
    h = absorb_bits(h, key_);
    h = absorb_bits(h, x);
    Bits out(out_len_);
    for (int i = 0; i < out_len_; ++i) {
        if (i % 64 == 0) h = mix(h + 0x9e3779b97f4a7c15ull * (i / 64 + 1));
        out.set(i, static_cast<int>((h >> (i % 64)) & 1u));
    }
    return out;
}

SkeScheme::SkeScheme(SchemeParams params, uint64_t domain_seed, bool normal_form, bool pseudorandom)
    : params_(params), domain_(domain_seed), normal_form_(normal_form), pseudorandom_(pseudorandom) {
    params_.validate();
    if (normal_form_ && params_.l_ek != params_.l_dk)
        throw std::invalid_argument("SkeScheme: normal form requires l_ek == l_dk");
}

SkeKey SkeScheme::gen(RngStream& rng) const { return SkeKey{Bits::random(rng, params_.l_ek)}; }

PrfInstance SkeScheme::prf_for(const SkeKey& key) const {
    return PrfInstance(domain_, key.material, params_.lambda, params_.l_m);
}

SkeCiphertext SkeScheme::enc(const SkeKey& key, const Bits& m, RngStream& rng) const {
    if (static_cast<int>(m.size()) != params_.l_m) throw std::invalid_argument("SkeScheme::enc: message length mismatch");
    Bits nonce = Bits::random(rng, params_.lambda);
    Bits body = prf_for(key).eval(nonce) ^ m;
    return {std::move(nonce), std::move(body)};
}

Bits SkeScheme::dec(const SkeKey& key, const SkeCiphertext& ct) const {
    if (static_cast<int>(ct.nonce.size()) != params_.lambda ||
        static_cast<int>(ct.body.size()) != params_.l_m)
        throw std::invalid_argument("SkeScheme::dec: ciphertext length mismatch");
    return prf_for(key).eval(ct.nonce) ^ ct.body;
}

ClearFallbackCiphertext ClearFallbackSke::enc(const SkeKey& key, const Bits& m, RngStream& rng) const {
    SkeCiphertext ct = inner_.enc(key, m, rng);
    if (inner_.dec(key, ct) != m) return {std::nullopt, m};  // output in the clear
    return {std::move(ct), Bits()};
}

Bits ClearFallbackSke::dec(const SkeKey& key, const ClearFallbackCiphertext& ct) const {
    if (!ct.ct) return ct.clear;
    return inner_.dec(key, *ct.ct);
}

}  // namespace uenc
