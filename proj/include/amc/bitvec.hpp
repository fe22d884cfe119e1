#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace amc {

// Fixed-length bit vector packed into 64-bit words. Bits past size() in the
// last word are always zero, so word-level equality and popcount are exact.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static BitVec from_string(const std::string& bits)
    {
        BitVec v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                v.set(i, true);
            } else if (bits[i] != '0') {
                throw std::invalid_argument("bit string may contain only '0' and '1'");
            }
        }
        return v;
    }

    // Low `size` bits of `value`, bit i of the vector = bit i of value.
    static BitVec from_uint(std::uint64_t value, std::size_t size)
    {
        BitVec v(size);
        if (size > 0) {
            v.words_[0] = size >= 64 ? value : value & ((std::uint64_t{1} << size) - 1);
        }
        return v;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool value)
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const
    {
        for (auto w : words_) {
            if (w != 0) return true;
        }
        return false;
    }

    // Parity of (*this AND other).
    bool and_parity(const BitVec& other) const
    {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & other.words_[k];
        return std::popcount(acc) & 1;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    // First 64 bits as an integer (bit i -> bit i).
    std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

    std::string to_string() const
    {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) = default;
    friend auto operator<=>(const BitVec& a, const BitVec& b)
    {
        if (auto c = a.size_ <=> b.size_; c != 0) return c;
        return a.words_ <=> b.words_;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace amc
