#pragma once
// Attribute sets as fixed-width bitsets over the query's variable order.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace latjoin {

// Hard cap on the number of query variables (lattice enumeration is
// exponential in this; data complexity is the contract).
constexpr int kMaxVars = 24;

struct AttrSet {
    uint32_t bits = 0;

    AttrSet() = default;
    explicit AttrSet(uint32_t b) : bits(b) {}

    static AttrSet single(int i) { return AttrSet(uint32_t(1) << i); }
    static AttrSet full(int k) { return AttrSet(k == 32 ? ~uint32_t(0) : (uint32_t(1) << k) - 1); }

    bool test(int i) const { return (bits >> i) & 1; }
    void set(int i) { bits |= uint32_t(1) << i; }
    void reset(int i) { bits &= ~(uint32_t(1) << i); }
    int count() const { return std::popcount(bits); }
    bool empty() const { return bits == 0; }

    bool subset_of(AttrSet o) const { return (bits & ~o.bits) == 0; }
    bool contains(AttrSet o) const { return o.subset_of(*this); }

    friend AttrSet operator|(AttrSet a, AttrSet b) { return AttrSet(a.bits | b.bits); }
    friend AttrSet operator&(AttrSet a, AttrSet b) { return AttrSet(a.bits & b.bits); }
    friend AttrSet operator-(AttrSet a, AttrSet b) { return AttrSet(a.bits & ~b.bits); }
    friend bool operator==(AttrSet a, AttrSet b) { return a.bits == b.bits; }
    friend bool operator!=(AttrSet a, AttrSet b) { return a.bits != b.bits; }
    // canonical order: by size, then by bit pattern
    friend bool operator<(AttrSet a, AttrSet b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a.bits < b.bits;
    }

    std::vector<int> members() const {
        std::vector<int> v;
        for (int i = 0; i < kMaxVars; ++i)
            if (test(i)) v.push_back(i);
        return v;
    }
};

// Render a set against a list of variable names, e.g. "xyu" or "{}".
inline std::string attrs_str(AttrSet s, const std::vector<std::string>& names) {
    if (s.empty()) return "{}";
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (s.test((int)i)) {
            if (!out.empty() && names[i].size() > 1) out += ",";
            out += names[i];
        }
    }
    return out;
}

}  // namespace latjoin
