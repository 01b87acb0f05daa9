#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcmid {

using VarId = std::uint16_t;

/// A flow parameter. Edge j -> i carries k_{i,j} (destination first); a leak
/// from compartment l carries k_{0,l}.
struct Parameter {
    int to = 0;
    int from = 0;

    static Parameter edge(int from, int to) { return {to, from}; }
    static Parameter leak(int compartment) { return {0, compartment}; }

    bool is_leak() const { return to == 0; }

    /// Rendered as k_{i,j}.
    std::string name() const;

    // Edge parameters ordered by (i, j); leak parameters follow, ordered by l.
    friend std::strong_ordering operator<=>(const Parameter& a, const Parameter& b) {
        if (auto c = a.is_leak() <=> b.is_leak(); c != 0) return c;
        if (auto c = a.to <=> b.to; c != 0) return c;
        return a.from <=> b.from;
    }
    friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// Dense index <-> parameter mapping. Fixed for the lifetime of an analysis.
class VarTable {
public:
    VarTable() = default;
    explicit VarTable(std::vector<Parameter> params);

    std::size_t size() const { return params_.size(); }
    const Parameter& operator[](VarId v) const { return params_.at(v); }
    std::span<const Parameter> parameters() const { return params_; }

    std::optional<VarId> find(const Parameter& p) const;
    VarId at(const Parameter& p) const;
    std::string name(VarId v) const;

    friend bool operator==(const VarTable&, const VarTable&) = default;

private:
    std::vector<Parameter> params_;
};

} // namespace lcmid
