#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pace::lex {

// Immutable after load; safe to share across threads.
class EmbeddingTable {
public:
    struct LoadStats {
        size_t kept = 0;
        size_t skipped_malformed = 0;
        size_t skipped_zero = 0;
        size_t skipped_duplicate = 0;
    };

    uint32_t dimension() const { return dimension_; }
    size_t size() const { return tokens_.size(); }
    const std::string& source_id() const { return source_id_; }
    const LoadStats& load_stats() const { return stats_; }

    // Fallback chain: exact token, lowercased, lowercased with surrounding
    // punctuation stripped. Absence is a value, not an error.
    std::optional<uint32_t> find(std::string_view raw) const;
    std::optional<std::span<const float>> lookup(std::string_view raw) const;

    std::span<const float> vector_at(uint32_t index) const;
    const std::string& token_at(uint32_t index) const;
    double norm_at(uint32_t index) const { return norms_[index]; }

    // Word-vector text format: one "token c1 .. cD" row per line, optional
    // "count dim" header auto-detected. Malformed rows are skipped and
    // counted; duplicates keep the first occurrence; zero vectors are
    // rejected (undefined cosine).
    static EmbeddingTable load(const std::filesystem::path& path,
                               std::optional<uint32_t> expected_dimension = {},
                               std::string source_id = "");

    static EmbeddingTable from_entries(
        uint32_t dimension,
        const std::vector<std::pair<std::string, std::vector<float>>>& entries,
        std::string source_id = "inline");

private:
    void insert(const std::string& token, std::span<const float> vec);
    void finalize_norms();

    uint32_t dimension_ = 0;
    std::string source_id_;
    std::vector<std::string> tokens_;
    std::vector<float> data_;    // row-major, dimension_ stride
    std::vector<double> norms_;  // cached euclidean norms
    std::unordered_map<std::string, uint32_t> exact_;
    std::unordered_map<std::string, uint32_t> lowercase_;  // first occurrence wins
    LoadStats stats_;
};

// 1 - a.b / (|a||b|), in [0, 2]. Throws on dimension mismatch or zero vector.
double cosine_distance(std::span<const float> a, std::span<const float> b);
// Same metric using the table's cached norms.
double cosine_distance(const EmbeddingTable& table, uint32_t a, uint32_t b);

struct ConcretenessNorms {
    // token (canonicalized) -> mean rating on the 0-5 scale
    std::unordered_map<std::string, double> ratings;
    std::string source_id;
    size_t rejected_out_of_range = 0;
    size_t skipped_malformed = 0;

    std::optional<double> rating(std::string_view raw) const;
};

struct NormsOptions {
    std::string word_column = "Word";
    std::string rating_column = "Conc.M";
    char delimiter = 0;  // 0 = sniff from header
};

// Ratings outside [0, 5] are rejected and counted.
ConcretenessNorms load_concreteness_norms(const std::filesystem::path& path,
                                          const NormsOptions& options = {});

}  // namespace pace::lex
