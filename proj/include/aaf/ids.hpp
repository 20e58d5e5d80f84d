#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aaf {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

/// A word over some interned alphabet, symbols identified by id.
using Word = std::vector<SymbolId>;

/// Interning table mapping names to dense ids. Ids are assigned in insertion
/// order and never change, so anything keyed by id is reproducible across runs.
class NameTable {
public:
    NameTable() = default;
    NameTable(std::initializer_list<std::string_view> names) {
        for (auto n : names) intern(n);
    }

    std::uint32_t intern(std::string_view name) {
        auto it = index_.find(std::string(name));
        if (it != index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(names_.size());
        names_.emplace_back(name);
        index_.emplace(names_.back(), id);
        return id;
    }

    std::optional<std::uint32_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(std::string_view name) const { return find(name).has_value(); }

    const std::string& name(std::uint32_t id) const { return names_.at(id); }

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }

    const std::vector<std::string>& names() const { return names_; }

    /// Two tables are interchangeable when they intern the same names in the
    /// same order (ids line up).
    friend bool operator==(const NameTable& a, const NameTable& b) {
        return a.names_ == b.names_;
    }

    /// True when both tables contain the same name set, irrespective of order.
    bool same_name_set(const NameTable& other) const;

    /// Id remapping from this table into `other` by name. Empty optional if a
    /// name is missing on the other side.
    std::optional<std::vector<std::uint32_t>> mapping_into(const NameTable& other) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Number of words of length <= max_len over an alphabet of given size.
std::uint64_t count_words(std::size_t alphabet_size, int max_len);

/// The index-th word in shortlex order (by length, then lexicographically by
/// symbol id). Index 0 is the empty word.
Word word_at_index(std::size_t alphabet_size, int max_len, std::uint64_t index);

/// SplitMix64: tiny deterministic generator used wherever reproducibility per
/// seed is part of a contract. Trial/worker seeds are derived by jumping the
/// master seed, so results do not depend on thread count or schedule.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Deterministic per-stream seed derivation.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        SplitMix64 g(master ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
        return g.next();
    }

private:
    std::uint64_t state_;
};

/// Render a word as space-separated symbol names, "(empty)" for epsilon.
std::string format_word(const Word& w, const NameTable& alphabet);

/// Computational class of an agent or machine, ordered by power.
enum class ClassLabel { Regular, ContextFree, ContextSensitive, TuringComplete };

std::string_view to_string(ClassLabel c);
std::optional<ClassLabel> class_label_from_string(std::string_view s);

} // namespace aaf
