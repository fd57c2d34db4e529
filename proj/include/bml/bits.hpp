#pragma once

#include <cstdint>
#include <vector>

#include "bml/errors.hpp"

namespace bml {

// Canonical bit-level state encodings.  Learner states serialize through
// these so the accountant can measure exact state sizes; encodings are
// self-delimiting (fixed-width fields plus explicit counts), so equal states
// always produce identical bit strings.
struct BitString {
    std::vector<std::uint8_t> bytes;
    std::uint64_t bit_count = 0;

    bool operator==(const BitString&) const = default;
};

class BitWriter {
public:
    // Appends `width` low bits of v, LSB first.
    void put(std::uint64_t v, unsigned width) {
        for (unsigned i = 0; i < width; ++i) {
            if (out_.bit_count % 8 == 0) out_.bytes.push_back(0);
            if ((v >> i) & 1)
                out_.bytes.back() |= (std::uint8_t)(1u << (out_.bit_count % 8));
            ++out_.bit_count;
        }
    }
    void put_bit(bool b) { put(b ? 1 : 0, 1); }

    BitString take() { return std::move(out_); }

private:
    BitString out_;
};

class BitReader {
public:
    explicit BitReader(const BitString& bs) : bs_(bs) {}

    std::uint64_t get(unsigned width) {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i) {
            if (pos_ >= bs_.bit_count) throw input_error("bit string underrun");
            if (bs_.bytes[pos_ / 8] >> (pos_ % 8) & 1) v |= (std::uint64_t)1 << i;
            ++pos_;
        }
        return v;
    }
    bool get_bit() { return get(1) != 0; }

private:
    const BitString& bs_;
    std::uint64_t pos_ = 0;
};

inline unsigned bits_for(std::uint64_t max_value) {
    unsigned b = 1;
    while (max_value >> b) ++b;
    return b;
}

} // namespace bml
