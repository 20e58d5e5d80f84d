#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aaf/ids.hpp"

namespace aaf {

/// Membership predicate over words of interned symbols. Implementations must
/// be pure and safe to call from several threads at once (every machine
/// engine in this library qualifies: specs are immutable, run state is local).
using MembershipFn = std::function<bool(std::span<const SymbolId>)>;

struct ScanResult {
    /// Shortlex index of the first word on which the two predicates disagree.
    std::optional<std::uint64_t> first_disagreement;
    std::uint64_t words_checked = 0;
};

/// Compares two predicates on every word of length <= max_len. The parallel
/// kernel chunks the shortlex index space across threads and reduces to the
/// minimum disagreeing index, so its result is identical to the serial
/// reference regardless of thread count.
ScanResult scan_disagreement(std::size_t alphabet_size, int max_len,
                             const MembershipFn& f1, const MembershipFn& f2);
ScanResult scan_disagreement_serial(std::size_t alphabet_size, int max_len,
                                    const MembershipFn& f1, const MembershipFn& f2);

/// Acceptance bitmap of a predicate over all words of length <= max_len,
/// indexed in shortlex order.
std::vector<std::uint8_t> membership_signature(std::size_t alphabet_size, int max_len,
                                               const MembershipFn& f);
std::vector<std::uint8_t> membership_signature_serial(std::size_t alphabet_size, int max_len,
                                                      const MembershipFn& f);

/// One Monte-Carlo trial: draws from its own generator, reports a hit.
using TrialFn = std::function<bool(SplitMix64&)>;

struct TrialCounts {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
};

/// Runs `trials` independent trials. Trial i draws from a generator seeded by
/// SplitMix64::derive(master_seed, i); the hit count is a plain sum, so the
/// parallel kernel is bit-identical to the serial reference.
TrialCounts run_trials(std::uint64_t trials, std::uint64_t master_seed, const TrialFn& trial);
TrialCounts run_trials_serial(std::uint64_t trials, std::uint64_t master_seed, const TrialFn& trial);

} // namespace aaf
