#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pace::chain {

// Scored chains are 20 words: the seed plus 19 associated entries.
inline constexpr int kChainWords = 20;
inline constexpr int kChainsPerSeed = 3;

struct SeedWord {
    std::string lemma;
    std::string chapter;
    int frequency_band = 0;  // 1..5

    bool operator==(const SeedWord&) const = default;
};

struct ChainEntry {
    std::string word;  // canonical form
    std::string raw;   // as produced, pre-canonicalization (audit + proper-noun check)
    std::string reason;
    int position = 0;  // >= 2; the seed is position 1

    bool operator==(const ChainEntry&) const = default;
};

enum class RejectReason { none, empty, multiword, non_alphabetic };

struct CanonResult {
    std::optional<std::string> token;
    RejectReason reject = RejectReason::none;

    bool ok() const { return token.has_value(); }
};

// Trim whitespace, strip surrounding punctuation, lowercase. Internal
// hyphens/apostrophes are kept (the seed list contains "son-in-law");
// internal whitespace is a multiword rejection, never a silent truncation.
CanonResult canonicalize_word(std::string_view raw);

std::string_view reject_reason_name(RejectReason r);

struct Violation {
    enum class Kind { length, positions, word, proper_noun, duplicate_of_seed };
    Kind kind;
    std::string detail;
    bool fatal = false;
};

std::string_view violation_kind_name(Violation::Kind k);

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;

    bool has(Violation::Kind k) const;
};

struct AssociationChain {
    SeedWord seed;
    std::vector<ChainEntry> entries;
    std::string subject_id;
    double temperature = 0.0;
    int chain_index = 1;  // 1..3

    // provenance
    std::string transport_id;
    std::string timestamp;
    std::string response_digest;

    ValidationReport validation;

    // association-type label per transition (position i -> i+1), filled by
    // the classification stage; empty when unclassified
    std::vector<std::string> transition_types;

    // seed followed by entry words, in position order
    std::vector<std::string> words() const;
    int total_words() const { return 1 + static_cast<int>(entries.size()); }
};

// Length/canonicalization failures are fatal; proper-noun (capitalized
// mid-list) and duplicate-of-seed are warnings only.
ValidationReport validate_chain(const AssociationChain& chain);

struct ChainSet {
    std::string subject_id;
    std::vector<AssociationChain> chains;

    size_t associated_word_count() const;
    // (seed lemma, chain_index) pairs absent or invalid relative to the corpus
    std::vector<std::pair<std::string, int>> missing_against(
        const std::vector<SeedWord>& corpus) const;
    std::vector<const AssociationChain*> chains_for(std::string_view lemma) const;
};

// --- seed corpus -----------------------------------------------------------

// Delimiter-separated fixture: lemma, chapter, frequency_band.
std::vector<SeedWord> load_seed_corpus(const std::filesystem::path& path);

// The canonical corpus: 110 seeds, 22 chapters x 5 frequency bands.
void require_canonical_corpus(const std::vector<SeedWord>& seeds);

// --- persistence -----------------------------------------------------------

// One JSON document per subject; save(load(x)) is byte-identical.
std::string chain_set_to_json(const ChainSet& set);
ChainSet chain_set_from_json(const std::string& text);
void save_chain_set(const ChainSet& set, const std::filesystem::path& path);
ChainSet load_chain_set(const std::filesystem::path& path);

}  // namespace pace::chain
