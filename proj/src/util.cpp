#include "pace/util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace pace::util {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with_upper(std::string_view s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

std::vector<std::string> split_delimited(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::optional<size_t> DelimitedFile::column(std::string_view name) const {
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

DelimitedFile read_delimited(const std::filesystem::path& path, char delim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());

    DelimitedFile out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            if (delim == 0) {
                if (line.find('\t') != std::string::npos) delim = '\t';
                else if (line.find(';') != std::string::npos) delim = ';';
                else delim = ',';
            }
            out.delimiter = delim;
            out.header = split_delimited(line, delim);
            first = false;
            continue;
        }
        if (line.empty()) continue;
        out.rows.push_back(split_delimited(line, delim));
    }
    if (first) throw std::runtime_error("empty file: " + path.string());
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    auto dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("rename failed for " + path.string() + ": " + ec.message());
    }
}

namespace {
uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

Rng::Rng(uint64_t seed) {
    // xoshiro256** seeded via splitmix64, per the reference recommendation.
    uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

uint64_t Rng::next_u64() {
    auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

uint64_t Rng::next_below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::derive_seed(uint64_t master, uint64_t stream_index) {
    uint64_t x = master ^ (0xa0761d6478bd642fULL * (stream_index + 1));
    return splitmix64(x);
}

std::vector<size_t> sample_without_replacement(size_t n, size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    // Partial Fisher-Yates: first k positions are the sample.
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(rng.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of empty set");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    double pos = q * static_cast<double>(values.size() - 1);
    size_t lo = static_cast<size_t>(std::floor(pos));
    size_t hi = static_cast<size_t>(std::ceil(pos));
    double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

double mean(std::span<const double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace pace::util
