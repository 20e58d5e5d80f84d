#include "aaf/ids.hpp"

#include <algorithm>
#include <unordered_set>

namespace aaf {

bool NameTable::same_name_set(const NameTable& other) const {
    if (size() != other.size()) return false;
    for (const auto& n : names_) {
        if (!other.contains(n)) return false;
    }
    return true;
}

std::optional<std::vector<std::uint32_t>> NameTable::mapping_into(const NameTable& other) const {
    std::vector<std::uint32_t> map(size());
    for (std::uint32_t id = 0; id < size(); ++id) {
        auto target = other.find(names_[id]);
        if (!target) return std::nullopt;
        map[id] = *target;
    }
    return map;
}

std::uint64_t count_words(std::size_t alphabet_size, int max_len) {
    std::uint64_t total = 0;
    std::uint64_t len_count = 1; // alphabet_size^len
    for (int len = 0; len <= max_len; ++len) {
        total += len_count;
        len_count *= alphabet_size;
    }
    return total;
}

Word word_at_index(std::size_t alphabet_size, int max_len, std::uint64_t index) {
    std::uint64_t len_count = 1;
    for (int len = 0; len <= max_len; ++len) {
        if (index < len_count) {
            Word w(static_cast<std::size_t>(len));
            // Base-|alphabet| digits, most significant first.
            for (int pos = len - 1; pos >= 0; --pos) {
                w[static_cast<std::size_t>(pos)] = static_cast<SymbolId>(index % alphabet_size);
                index /= alphabet_size;
            }
            return w;
        }
        index -= len_count;
        len_count *= alphabet_size;
    }
    throw Error("word_at_index: index out of range");
}

std::string format_word(const Word& w, const NameTable& alphabet) {
    if (w.empty()) return "(empty)";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) out += ' ';
        out += alphabet.name(w[i]);
    }
    return out;
}

std::string_view to_string(ClassLabel c) {
    switch (c) {
        case ClassLabel::Regular: return "Regular";
        case ClassLabel::ContextFree: return "ContextFree";
        case ClassLabel::ContextSensitive: return "ContextSensitive";
        case ClassLabel::TuringComplete: return "TuringComplete";
    }
    return "?";
}

std::optional<ClassLabel> class_label_from_string(std::string_view s) {
    if (s == "Regular") return ClassLabel::Regular;
    if (s == "ContextFree") return ClassLabel::ContextFree;
    if (s == "ContextSensitive") return ClassLabel::ContextSensitive;
    if (s == "TuringComplete") return ClassLabel::TuringComplete;
    return std::nullopt;
}

} // namespace aaf
