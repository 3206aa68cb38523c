#include "pace/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace pace::scoring {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::optional<uint32_t>> resolve_words(const chain::AssociationChain& chain,
                                                   const lex::EmbeddingTable& table,
                                                   int length) {
    auto words = chain.words();
    if (length < static_cast<int>(words.size())) words.resize(static_cast<size_t>(length));
    std::vector<std::optional<uint32_t>> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(table.find(w));
    return ids;
}

PositionDistance position_distance_resolved(std::span<const std::optional<uint32_t>> ids,
                                            int n, const lex::EmbeddingTable& table) {
    PositionDistance pd;
    pd.position = n;
    const auto& current = ids[static_cast<size_t>(n) - 1];
    if (!current) {
        pd.skipped_pairs = n - 1;
        return pd;
    }
    double sum = 0;
    int pairs = 0;
    for (int i = 1; i < n; ++i) {
        const auto& prev = ids[static_cast<size_t>(i) - 1];
        if (!prev) {
            ++pd.skipped_pairs;
            continue;
        }
        sum += lex::cosine_distance(table, *current, *prev);
        ++pairs;
    }
    if (pairs > 0) pd.value = sum / static_cast<double>(pairs);
    else pd.skipped_pairs = n - 1;
    return pd;
}

}  // namespace

PositionDistance position_distance(const chain::AssociationChain& chain, int n,
                                   const lex::EmbeddingTable& table) {
    if (n < 2 || n > chain.total_words())
        throw std::invalid_argument("position_distance: n out of range");
    auto ids = resolve_words(chain, table, chain.total_words());
    return position_distance_resolved(ids, n, table);
}

ChainScore chain_distance(const chain::AssociationChain& chain,
                          const lex::EmbeddingTable& table, int length) {
    if (length < 2) throw std::invalid_argument("chain_distance: length must be >= 2");
    if (length > chain.total_words())
        throw std::invalid_argument("chain_distance: length exceeds chain words");

    ChainScore score;
    score.effective_length = length;
    auto ids = resolve_words(chain, table, length);

    double sum = 0;
    int present = 0;
    for (int n = 2; n <= length; ++n) {
        auto pd = position_distance_resolved(ids, n, table);
        score.skipped_pairs += pd.skipped_pairs;
        if (pd.value) {
            sum += *pd.value;
            ++present;
        }
        score.positions.push_back(std::move(pd));
    }
    if (present > 0) score.value = sum / static_cast<double>(present);
    return score;
}

std::optional<double> seed_score(std::span<const std::optional<double>> chain_values,
                                 int* missing_count) {
    double sum = 0;
    int present = 0, missing = 0;
    for (const auto& v : chain_values) {
        if (v) {
            sum += *v;
            ++present;
        } else {
            ++missing;
        }
    }
    if (missing_count) *missing_count = missing;
    if (present == 0) return std::nullopt;
    return sum / static_cast<double>(present);
}

ModelScorecard model_score(const std::string& subject_id, std::vector<SeedScore> seeds,
                           const std::string& embedding_source, int length) {
    if (seeds.empty()) throw std::invalid_argument("model_score: no seed scores");
    ModelScorecard card;
    card.subject_id = subject_id;
    card.embedding_source = embedding_source;
    card.chain_length = length;
    card.seeds = std::move(seeds);

    double sum = 0;
    int present = 0;
    std::map<std::string, std::pair<double, int>> chapters;
    for (const auto& s : card.seeds) {
        card.total_skipped_pairs += s.skipped_pairs;
        if (!s.value) continue;
        sum += *s.value;
        ++present;
        if (!s.chapter.empty()) {
            auto& [csum, cn] = chapters[s.chapter];
            csum += *s.value;
            ++cn;
        }
    }
    if (present > 0) card.model_score = sum / static_cast<double>(present);
    for (const auto& [chapter, agg] : chapters) {
        card.chapter_means[chapter] = agg.first / static_cast<double>(agg.second);
    }
    return card;
}

ModelScorecard score_chain_set(const chain::ChainSet& set,
                               const std::vector<chain::SeedWord>& corpus,
                               const lex::EmbeddingTable& table, int length) {
    std::vector<SeedScore> seeds;
    seeds.reserve(corpus.size());
    for (const auto& seed : corpus) {
        SeedScore ss;
        ss.lemma = seed.lemma;
        ss.chapter = seed.chapter;
        for (const auto* c : set.chains_for(seed.lemma)) {
            if (c->chain_index < 1 || c->chain_index > chain::kChainsPerSeed) continue;
            if (!c->validation.valid) continue;
            int use = std::min(length, c->total_words());
            if (use < 2) continue;
            auto cs = chain_distance(*c, table, use);
            ss.skipped_pairs += cs.skipped_pairs;
            ss.chain_values[static_cast<size_t>(c->chain_index) - 1] = cs.value;
        }
        int missing = 0;
        ss.value = seed_score(ss.chain_values, &missing);
        ss.missing_chains = missing;
        seeds.push_back(std::move(ss));
    }
    return model_score(set.subject_id, std::move(seeds), table.source_id(), length);
}

std::map<int, double> truncated_scores(const chain::ChainSet& set,
                                       const std::vector<chain::SeedWord>& corpus,
                                       const lex::EmbeddingTable& table,
                                       const std::set<int>& lengths) {
    std::map<int, double> out;
    for (int length : lengths) {
        if (length < 2 || length > chain::kChainWords)
            throw std::invalid_argument("truncated_scores: length out of [2, 20]");
        auto card = score_chain_set(set, corpus, table, length);
        if (card.model_score) out[length] = *card.model_score;
    }
    return out;
}

std::string scorecard_to_json(const ModelScorecard& card) {
    json seeds = json::array();
    for (const auto& s : card.seeds) {
        json chains = json::array();
        for (const auto& v : s.chain_values) {
            if (v) chains.push_back(*v);
            else chains.push_back(nullptr);
        }
        json row{{"seed", s.lemma}, {"chapter", s.chapter}};
        if (s.value) row["score"] = *s.value;
        else row["score"] = nullptr;
        row["chain_scores"] = chains;
        row["missing_chains"] = s.missing_chains;
        row["skipped_pairs"] = s.skipped_pairs;
        seeds.push_back(std::move(row));
    }
    json doc{{"format", "pace-scorecard-v1"},
             {"subject_id", card.subject_id},
             {"embedding_source", card.embedding_source},
             {"chain_length", card.chain_length}};
    if (card.model_score) doc["model_score"] = *card.model_score;
    else doc["model_score"] = nullptr;
    doc["chapter_means"] = card.chapter_means;
    if (!card.truncated.empty()) {
        json trunc = json::object();
        for (const auto& [len, v] : card.truncated) trunc[std::to_string(len)] = v;
        doc["truncated"] = trunc;
    }
    doc["total_skipped_pairs"] = card.total_skipped_pairs;
    doc["seeds"] = seeds;
    return doc.dump(2) + "\n";
}

ModelScorecard scorecard_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("format", "") != "pace-scorecard-v1")
        throw std::runtime_error("not a pace-scorecard-v1 document");
    ModelScorecard card;
    card.subject_id = doc.at("subject_id").get<std::string>();
    card.embedding_source = doc.value("embedding_source", "");
    card.chain_length = doc.value("chain_length", chain::kChainWords);
    if (doc.contains("model_score") && !doc.at("model_score").is_null())
        card.model_score = doc.at("model_score").get<double>();
    if (doc.contains("chapter_means"))
        card.chapter_means = doc.at("chapter_means").get<std::map<std::string, double>>();
    if (doc.contains("truncated")) {
        for (const auto& [k, v] : doc.at("truncated").items())
            card.truncated[std::stoi(k)] = v.get<double>();
    }
    card.total_skipped_pairs = doc.value("total_skipped_pairs", 0);
    for (const auto& row : doc.at("seeds")) {
        SeedScore s;
        s.lemma = row.at("seed").get<std::string>();
        s.chapter = row.value("chapter", "");
        if (!row.at("score").is_null()) s.value = row.at("score").get<double>();
        const auto& chains = row.at("chain_scores");
        for (size_t i = 0; i < chains.size() && i < s.chain_values.size(); ++i) {
            if (!chains[i].is_null()) s.chain_values[i] = chains[i].get<double>();
        }
        s.missing_chains = row.value("missing_chains", 0);
        s.skipped_pairs = row.value("skipped_pairs", 0);
        card.seeds.push_back(std::move(s));
    }
    return card;
}

std::string scorecard_csv_header(std::span<const std::string> chapters) {
    std::string line = "subject_id,model_score";
    for (const auto& c : chapters) {
        std::string col = c;
        std::replace(col.begin(), col.end(), ',', ';');
        line += "," + col;
    }
    return line;
}

std::string scorecard_csv_row(const ModelScorecard& card,
                              std::span<const std::string> chapters) {
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    std::string line = card.subject_id;
    line += ",";
    line += card.model_score ? fmt(*card.model_score) : std::string();
    for (const auto& c : chapters) {
        line += ",";
        auto it = card.chapter_means.find(c);
        if (it != card.chapter_means.end()) line += fmt(it->second);
    }
    return line;
}

}  // namespace pace::scoring
