#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uenc/rng.hpp"

namespace uenc {

// A bitstring, one bit per element. Desk-scale sizes only, so clarity wins
// over packing.
class Bits {
  public:
    Bits() = default;
    explicit Bits(size_t n, int fill = 0) : v_(n, static_cast<uint8_t>(fill & 1)) {}
    Bits(std::initializer_list<int> bits) {
        v_.reserve(bits.size());
        for (int b : bits) v_.push_back(static_cast<uint8_t>(b & 1));
    }

    static Bits random(RngStream& rng, size_t n) {
        Bits b(n);
        for (size_t i = 0; i < n; ++i) b.v_[i] = static_cast<uint8_t>(rng.bit());
        return b;
    }

    // Little-endian view of an integer's low n bits: bit i of the result is
    // (x >> i) & 1.
    static Bits from_uint(uint64_t x, size_t n) {
        Bits b(n);
        for (size_t i = 0; i < n; ++i) b.v_[i] = static_cast<uint8_t>((x >> i) & 1u);
        return b;
    }

    size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }
    int operator[](size_t i) const { return v_[i]; }
    void set(size_t i, int b) { v_[i] = static_cast<uint8_t>(b & 1); }
    void push_back(int b) { v_.push_back(static_cast<uint8_t>(b & 1)); }

    void append(const Bits& other) { v_.insert(v_.end(), other.v_.begin(), other.v_.end()); }

    Bits slice(size_t start, size_t len) const {
        if (start + len > v_.size()) throw std::out_of_range("Bits::slice out of range");
        Bits b(len);
        for (size_t i = 0; i < len; ++i) b.v_[i] = v_[start + i];
        return b;
    }

    Bits operator^(const Bits& other) const {
        if (size() != other.size()) throw std::invalid_argument("Bits xor: length mismatch");
        Bits b(size());
        for (size_t i = 0; i < size(); ++i) b.v_[i] = v_[i] ^ other.v_[i];
        return b;
    }

    bool operator==(const Bits& other) const { return v_ == other.v_; }
    bool operator!=(const Bits& other) const { return v_ != other.v_; }

    int parity() const {
        int p = 0;
        for (uint8_t b : v_) p ^= b;
        return p;
    }

    uint64_t to_uint() const {
        if (size() > 64) throw std::invalid_argument("Bits::to_uint: too long");
        uint64_t x = 0;
        for (size_t i = 0; i < size(); ++i) x |= static_cast<uint64_t>(v_[i]) << i;
        return x;
    }

    // Hex serialization for fixtures; MSB-first within the string, zero-padded
    // to whole nibbles.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        size_t nibbles = (size() + 3) / 4;
        std::string out(nibbles, '0');
        for (size_t i = 0; i < size(); ++i) {
            if (v_[i]) {
                size_t nib = nibbles - 1 - i / 4;
                out[nib] = digits[(out[nib] <= '9' ? out[nib] - '0' : out[nib] - 'a' + 10) | (1 << (i % 4))];
            }
        }
        return out;
    }

    static Bits from_hex(const std::string& hex, size_t n) {
        Bits b(n);
        for (size_t i = 0; i < n; ++i) {
            size_t nib = hex.size() - 1 - i / 4;
            if (nib >= hex.size()) throw std::invalid_argument("Bits::from_hex: string too short");
            char c = hex[nib];
            int val = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
            if (val < 0) throw std::invalid_argument("Bits::from_hex: bad digit");
            b.v_[i] = static_cast<uint8_t>((val >> (i % 4)) & 1);
        }
        return b;
    }

    const std::vector<uint8_t>& raw() const { return v_; }

  private:
    std::vector<uint8_t> v_;
};

}  // namespace uenc
