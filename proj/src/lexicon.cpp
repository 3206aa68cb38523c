#include "pace/lexicon.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pace/kernels.hpp"
#include "pace/util.hpp"

namespace pace::lex {
namespace {

std::string strip_surrounding_punct(std::string_view s) {
    size_t b = 0, e = s.size();
    auto is_word_char = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
    while (b < e && !is_word_char(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && !is_word_char(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool parse_floats(std::string_view line, size_t start, std::vector<float>& out) {
    out.clear();
    size_t i = start;
    const char* end = line.data() + line.size();
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        float v;
        auto [ptr, ec] = std::from_chars(line.data() + i, end, v);
        if (ec != std::errc()) return false;
        out.push_back(v);
        i = static_cast<size_t>(ptr - line.data());
    }
    return true;
}

}  // namespace

std::optional<uint32_t> EmbeddingTable::find(std::string_view raw) const {
    if (auto it = exact_.find(std::string(raw)); it != exact_.end()) return it->second;
    std::string lower = util::to_lower(raw);
    if (auto it = lowercase_.find(lower); it != lowercase_.end()) return it->second;
    std::string stripped = strip_surrounding_punct(lower);
    if (stripped != lower && !stripped.empty()) {
        if (auto it = lowercase_.find(stripped); it != lowercase_.end()) return it->second;
    }
    return std::nullopt;
}

std::optional<std::span<const float>> EmbeddingTable::lookup(std::string_view raw) const {
    auto idx = find(raw);
    if (!idx) return std::nullopt;
    return vector_at(*idx);
}

std::span<const float> EmbeddingTable::vector_at(uint32_t index) const {
    return {data_.data() + size_t(index) * dimension_, dimension_};
}

const std::string& EmbeddingTable::token_at(uint32_t index) const {
    return tokens_[index];
}

void EmbeddingTable::insert(const std::string& token, std::span<const float> vec) {
    uint32_t idx = static_cast<uint32_t>(tokens_.size());
    tokens_.push_back(token);
    data_.insert(data_.end(), vec.begin(), vec.end());
    exact_.emplace(token, idx);
    lowercase_.emplace(util::to_lower(token), idx);  // keeps first occurrence
}

void EmbeddingTable::finalize_norms() {
    norms_.resize(tokens_.size());
    const auto& ops = kernels::active();
    for (size_t i = 0; i < tokens_.size(); ++i) {
        norms_[i] = std::sqrt(ops.squared_norm(data_.data() + i * dimension_, dimension_));
    }
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path,
                                    std::optional<uint32_t> expected_dimension,
                                    std::string source_id) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vector file: " + path.string());

    EmbeddingTable table;
    table.source_id_ = source_id.empty() ? path.filename().string() : std::move(source_id);

    std::string line;
    std::vector<float> vec;
    bool first_line = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        size_t ws = line.find_first_of(" \t");
        if (first_line) {
            first_line = false;
            // Optional header: exactly two integer tokens (count, dimension).
            long long cnt, dim;
            auto r1 = std::from_chars(line.data(), line.data() + line.size(), cnt);
            if (r1.ec == std::errc() && ws != std::string::npos) {
                size_t p = line.find_first_not_of(" \t", ws);
                if (p != std::string::npos) {
                    auto r2 = std::from_chars(line.data() + p, line.data() + line.size(), dim);
                    if (r2.ec == std::errc() && r2.ptr == line.data() + line.size() &&
                        dim > 0 && cnt >= 0) {
                        table.dimension_ = static_cast<uint32_t>(dim);
                        continue;
                    }
                }
            }
        }

        if (ws == std::string::npos) {
            ++table.stats_.skipped_malformed;
            continue;
        }
        std::string token = line.substr(0, ws);
        if (!parse_floats(line, ws, vec) || vec.empty()) {
            ++table.stats_.skipped_malformed;
            continue;
        }

        if (table.dimension_ == 0) {
            table.dimension_ = expected_dimension.value_or(static_cast<uint32_t>(vec.size()));
        }
        if (vec.size() != table.dimension_) {
            ++table.stats_.skipped_malformed;
            continue;
        }
        bool all_zero = true;
        for (float v : vec) {
            if (v != 0.0f) { all_zero = false; break; }
        }
        if (all_zero) {
            ++table.stats_.skipped_zero;
            continue;
        }
        if (table.exact_.count(token)) {
            ++table.stats_.skipped_duplicate;
            continue;
        }
        table.insert(token, vec);
        ++table.stats_.kept;
    }

    if (expected_dimension && table.dimension_ != *expected_dimension) {
        throw std::runtime_error("vector file dimension " + std::to_string(table.dimension_) +
                                 " does not match expected " +
                                 std::to_string(*expected_dimension) + ": " + path.string());
    }
    if (table.tokens_.empty()) {
        throw std::runtime_error("no usable vectors in " + path.string());
    }
    table.finalize_norms();
    return table;
}

EmbeddingTable EmbeddingTable::from_entries(
    uint32_t dimension, const std::vector<std::pair<std::string, std::vector<float>>>& entries,
    std::string source_id) {
    EmbeddingTable table;
    table.dimension_ = dimension;
    table.source_id_ = std::move(source_id);
    for (const auto& [token, vec] : entries) {
        if (vec.size() != dimension)
            throw std::runtime_error("entry dimension mismatch for token: " + token);
        bool all_zero = true;
        for (float v : vec) {
            if (v != 0.0f) { all_zero = false; break; }
        }
        if (all_zero) {
            ++table.stats_.skipped_zero;
            continue;
        }
        if (table.exact_.count(token)) {
            ++table.stats_.skipped_duplicate;
            continue;
        }
        table.insert(token, vec);
        ++table.stats_.kept;
    }
    if (table.tokens_.empty()) throw std::runtime_error("no usable vectors supplied");
    table.finalize_norms();
    return table;
}

double cosine_distance(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("cosine_distance: dimension mismatch");
    if (a.empty()) throw std::invalid_argument("cosine_distance: empty vectors");
    auto s = kernels::active().cosine_stats(a.data(), b.data(), a.size());
    if (s.norm_a_sq == 0.0 || s.norm_b_sq == 0.0)
        throw std::invalid_argument("cosine_distance: zero vector");
    return 1.0 - s.dot / (std::sqrt(s.norm_a_sq) * std::sqrt(s.norm_b_sq));
}

double cosine_distance(const EmbeddingTable& table, uint32_t a, uint32_t b) {
    auto va = table.vector_at(a);
    auto vb = table.vector_at(b);
    double dot = kernels::active().dot(va.data(), vb.data(), va.size());
    return 1.0 - dot / (table.norm_at(a) * table.norm_at(b));
}

std::optional<double> ConcretenessNorms::rating(std::string_view raw) const {
    if (auto it = ratings.find(std::string(raw)); it != ratings.end()) return it->second;
    std::string lower = util::to_lower(raw);
    if (auto it = ratings.find(lower); it != ratings.end()) return it->second;
    return std::nullopt;
}

ConcretenessNorms load_concreteness_norms(const std::filesystem::path& path,
                                          const NormsOptions& options) {
    auto file = util::read_delimited(path, options.delimiter);
    auto wcol = file.column(options.word_column);
    auto rcol = file.column(options.rating_column);
    if (!wcol || !rcol) {
        throw std::runtime_error("norms file " + path.string() + " lacks columns '" +
                                 options.word_column + "'/'" + options.rating_column + "'");
    }

    ConcretenessNorms norms;
    norms.source_id = path.filename().string();
    for (const auto& row : file.rows) {
        if (row.size() <= std::max(*wcol, *rcol)) {
            ++norms.skipped_malformed;
            continue;
        }
        std::string word = util::to_lower(util::trim(row[*wcol]));
        if (word.empty()) {
            ++norms.skipped_malformed;
            continue;
        }
        double rating;
        const std::string& cell = row[*rcol];
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), rating);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            ++norms.skipped_malformed;
            continue;
        }
        if (rating < 0.0 || rating > 5.0) {
            ++norms.rejected_out_of_range;
            continue;
        }
        norms.ratings.emplace(std::move(word), rating);
    }
    if (norms.ratings.empty())
        throw std::runtime_error("no usable rows in norms file: " + path.string());
    return norms;
}

}  // namespace pace::lex
