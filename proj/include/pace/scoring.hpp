#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pace/chain_model.hpp"
#include "pace/lexicon.hpp"

namespace pace::scoring {

struct PositionDistance {
    int position = 0;                // n >= 2
    std::optional<double> value;     // A_n; absent when no pair was computable
    int skipped_pairs = 0;           // pairs dropped for out-of-vocabulary words
};

struct ChainScore {
    std::optional<double> value;  // A_chain = mean of present A_n
    std::vector<PositionDistance> positions;
    int effective_length = 0;  // words considered after truncation
    int skipped_pairs = 0;
};

struct SeedScore {
    std::string lemma;
    std::string chapter;
    std::optional<double> value;  // A_seed; mean of present chain scores
    std::array<std::optional<double>, chain::kChainsPerSeed> chain_values;
    int missing_chains = 0;
    int skipped_pairs = 0;
};

struct ModelScorecard {
    std::string subject_id;
    std::string embedding_source;
    int chain_length = chain::kChainWords;
    std::optional<double> model_score;  // A_model; mean over present A_seed
    std::vector<SeedScore> seeds;
    std::map<std::string, double> chapter_means;  // unweighted mean of the chapter's seeds
    std::map<int, double> truncated;              // extra lengths -> A_model
    int total_skipped_pairs = 0;
};

// A_n: mean cosine distance from position n to every earlier position.
// Pairs with an unresolvable word are skipped and counted; the denominator
// is the number of computed pairs (chains are never dropped wholesale).
PositionDistance position_distance(const chain::AssociationChain& chain, int n,
                                   const lex::EmbeddingTable& table);

// A_chain over the first `length` words (A_n for n = 2..length averaged).
ChainScore chain_distance(const chain::AssociationChain& chain,
                          const lex::EmbeddingTable& table,
                          int length = chain::kChainWords);

// Mean of present chain scores; missingness reported, never imputed.
std::optional<double> seed_score(
    std::span<const std::optional<double>> chain_values, int* missing_count = nullptr);

// Full Eq. (1)-(4) rollup for one subject against the seed corpus.
ModelScorecard score_chain_set(const chain::ChainSet& set,
                               const std::vector<chain::SeedWord>& corpus,
                               const lex::EmbeddingTable& table,
                               int length = chain::kChainWords);

// Aggregate pre-computed per-seed scores (Eq. 4 + per-chapter means).
ModelScorecard model_score(const std::string& subject_id, std::vector<SeedScore> seeds,
                           const std::string& embedding_source, int length);

// Rescoring at each truncation; length 20 reproduces the untruncated score.
std::map<int, double> truncated_scores(const chain::ChainSet& set,
                                       const std::vector<chain::SeedWord>& corpus,
                                       const lex::EmbeddingTable& table,
                                       const std::set<int>& lengths);

// Scorecard JSON (full detail) and one-line CSV row (summary).
std::string scorecard_to_json(const ModelScorecard& card);
ModelScorecard scorecard_from_json(const std::string& text);
std::string scorecard_csv_header(std::span<const std::string> chapters);
std::string scorecard_csv_row(const ModelScorecard& card, std::span<const std::string> chapters);

}  // namespace pace::scoring
