#include "aaf/parallel.hpp"

#include <algorithm>

namespace aaf {

namespace {
constexpr std::uint64_t kScanChunk = 4096;
}

ScanResult scan_disagreement_serial(std::size_t alphabet_size, int max_len,
                                    const MembershipFn& f1, const MembershipFn& f2) {
    const std::uint64_t total = count_words(alphabet_size, max_len);
    ScanResult result;
    for (std::uint64_t i = 0; i < total; ++i) {
        Word w = word_at_index(alphabet_size, max_len, i);
        ++result.words_checked;
        if (f1(w) != f2(w)) {
            result.first_disagreement = i;
            return result;
        }
    }
    return result;
}

ScanResult scan_disagreement(std::size_t alphabet_size, int max_len,
                             const MembershipFn& f1, const MembershipFn& f2) {
    const std::uint64_t total = count_words(alphabet_size, max_len);
    ScanResult result;
    for (std::uint64_t base = 0; base < total; base += kScanChunk) {
        const std::uint64_t end = std::min(base + kScanChunk, total);
        std::uint64_t found = UINT64_MAX;
#ifdef _OPENMP
#pragma omp parallel for reduction(min : found) schedule(dynamic, 64)
#endif
        for (std::int64_t i = static_cast<std::int64_t>(base); i < static_cast<std::int64_t>(end);
             ++i) {
            Word w = word_at_index(alphabet_size, max_len, static_cast<std::uint64_t>(i));
            if (f1(w) != f2(w)) found = std::min(found, static_cast<std::uint64_t>(i));
        }
        result.words_checked = end;
        if (found != UINT64_MAX) {
            result.first_disagreement = found;
            return result;
        }
    }
    return result;
}

std::vector<std::uint8_t> membership_signature_serial(std::size_t alphabet_size, int max_len,
                                                      const MembershipFn& f) {
    const std::uint64_t total = count_words(alphabet_size, max_len);
    std::vector<std::uint8_t> sig(total, 0);
    for (std::uint64_t i = 0; i < total; ++i) {
        sig[i] = f(word_at_index(alphabet_size, max_len, i)) ? 1 : 0;
    }
    return sig;
}

std::vector<std::uint8_t> membership_signature(std::size_t alphabet_size, int max_len,
                                               const MembershipFn& f) {
    const std::uint64_t total = count_words(alphabet_size, max_len);
    std::vector<std::uint8_t> sig(total, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
        sig[static_cast<std::size_t>(i)] =
            f(word_at_index(alphabet_size, max_len, static_cast<std::uint64_t>(i))) ? 1 : 0;
    }
    return sig;
}

TrialCounts run_trials_serial(std::uint64_t trials, std::uint64_t master_seed,
                              const TrialFn& trial) {
    TrialCounts counts;
    counts.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        SplitMix64 rng(SplitMix64::derive(master_seed, i));
        if (trial(rng)) ++counts.hits;
    }
    return counts;
}

TrialCounts run_trials(std::uint64_t trials, std::uint64_t master_seed, const TrialFn& trial) {
    TrialCounts counts;
    counts.trials = trials;
    std::uint64_t hits = 0;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : hits) schedule(static)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i) {
        SplitMix64 rng(SplitMix64::derive(master_seed, static_cast<std::uint64_t>(i)));
        if (trial(rng)) ++hits;
    }
    counts.hits = hits;
    return counts;
}

} // namespace aaf
