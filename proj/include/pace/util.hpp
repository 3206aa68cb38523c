#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pace::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_upper(std::string_view s);

// Splits on a single-character delimiter; supports double-quoted fields
// with "" escapes. Does not merge adjacent delimiters.
std::vector<std::string> split_delimited(std::string_view line, char delim);

struct DelimitedFile {
    char delimiter = ',';
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<size_t> column(std::string_view name) const;
};

// Reads a delimited text file. When `delim` is 0 the delimiter is sniffed
// from the header line (tab beats semicolon beats comma).
DelimitedFile read_delimited(const std::filesystem::path& path, char delim = 0);

std::string read_text_file(const std::filesystem::path& path);

// Write-to-temporary-then-rename so concurrent writers never expose a
// partially written file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

// Deterministic PRNG used everywhere randomness is required. mt19937_64 is
// bit-stable across platforms; the bounded draw avoids
// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();
    // Uniform in [0, n). Rejection sampling, no modulo bias.
    uint64_t next_below(uint64_t n);
    // Uniform in [0, 1).
    double next_double();

    // Derives an independent stream; mixing is splitmix64-based so streams
    // for distinct indices never coincide with the parent sequence.
    static uint64_t derive_seed(uint64_t master, uint64_t stream_index);

private:
    uint64_t state_[4];
};

// Fisher-Yates using Rng; deterministic for a given seed.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// k distinct indices drawn from [0, n) without replacement.
std::vector<size_t> sample_without_replacement(size_t n, size_t k, Rng& rng);

// Linear-interpolation percentile (q in [0,1]) over an unsorted copy.
double percentile(std::vector<double> values, double q);

double mean(std::span<const double> v);
// Sample standard deviation (n-1 denominator); 0 for n < 2.
double sample_stddev(std::span<const double> v);

}  // namespace pace::util
