#include "pace/chain_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "pace/util.hpp"

namespace pace::chain {

CanonResult canonicalize_word(std::string_view raw) {
    std::string s = util::trim(raw);
    if (s.empty()) return {std::nullopt, RejectReason::empty};
    if (s.find_first_of(" \t\n\r") != std::string::npos)
        return {std::nullopt, RejectReason::multiword};

    auto is_word_char = [](unsigned char c) { return std::isalnum(c) || c >= 0x80; };
    size_t b = 0, e = s.size();
    while (b < e && !is_word_char(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && !is_word_char(static_cast<unsigned char>(s[e - 1]))) --e;
    if (b >= e) return {std::nullopt, RejectReason::non_alphabetic};

    std::string core = util::to_lower(std::string_view(s).substr(b, e - b));
    bool has_alpha = std::any_of(core.begin(), core.end(), [](unsigned char c) {
        return std::isalpha(c) || c >= 0x80;
    });
    if (!has_alpha) return {std::nullopt, RejectReason::non_alphabetic};
    return {std::move(core), RejectReason::none};
}

std::string_view reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::none: return "none";
        case RejectReason::empty: return "empty";
        case RejectReason::multiword: return "multiword";
        case RejectReason::non_alphabetic: return "non_alphabetic";
    }
    return "unknown";
}

std::string_view violation_kind_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::length: return "length";
        case Violation::Kind::positions: return "positions";
        case Violation::Kind::word: return "word";
        case Violation::Kind::proper_noun: return "proper_noun";
        case Violation::Kind::duplicate_of_seed: return "duplicate_of_seed";
    }
    return "unknown";
}

namespace {
std::optional<Violation::Kind> violation_kind_from_name(std::string_view name) {
    using K = Violation::Kind;
    if (name == "length") return K::length;
    if (name == "positions") return K::positions;
    if (name == "word") return K::word;
    if (name == "proper_noun") return K::proper_noun;
    if (name == "duplicate_of_seed") return K::duplicate_of_seed;
    return std::nullopt;
}
}  // namespace

bool ValidationReport::has(Violation::Kind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
}

std::vector<std::string> AssociationChain::words() const {
    std::vector<std::string> out;
    out.reserve(entries.size() + 1);
    out.push_back(seed.lemma);
    for (const auto& e : entries) out.push_back(e.word);
    return out;
}

ValidationReport validate_chain(const AssociationChain& chain) {
    ValidationReport report;
    auto add = [&](Violation::Kind kind, std::string detail, bool fatal) {
        report.violations.push_back({kind, std::move(detail), fatal});
        if (fatal) report.valid = false;
    };

    if (chain.total_words() != kChainWords) {
        add(Violation::Kind::length,
            "expected " + std::to_string(kChainWords) + " words, got " +
                std::to_string(chain.total_words()),
            true);
    }

    int expected_pos = 2;
    for (const auto& entry : chain.entries) {
        if (entry.position != expected_pos) {
            add(Violation::Kind::positions,
                "expected position " + std::to_string(expected_pos) + ", got " +
                    std::to_string(entry.position),
                true);
            break;
        }
        ++expected_pos;
    }

    for (const auto& entry : chain.entries) {
        auto canon = canonicalize_word(entry.word);
        if (!canon.ok() || *canon.token != entry.word) {
            add(Violation::Kind::word,
                "position " + std::to_string(entry.position) + ": '" + entry.word + "' (" +
                    std::string(reject_reason_name(canon.reject)) + ")",
                true);
            continue;
        }
        const std::string& observed = entry.raw.empty() ? entry.word : entry.raw;
        if (util::starts_with_upper(util::trim(observed))) {
            add(Violation::Kind::proper_noun,
                "position " + std::to_string(entry.position) + ": '" + observed + "'", false);
        }
        if (entry.word == chain.seed.lemma) {
            add(Violation::Kind::duplicate_of_seed,
                "position " + std::to_string(entry.position), false);
        }
    }
    return report;
}

size_t ChainSet::associated_word_count() const {
    size_t n = 0;
    for (const auto& c : chains) n += c.entries.size();
    return n;
}

std::vector<std::pair<std::string, int>> ChainSet::missing_against(
    const std::vector<SeedWord>& corpus) const {
    std::set<std::pair<std::string, int>> present;
    for (const auto& c : chains) {
        if (c.validation.valid) present.emplace(c.seed.lemma, c.chain_index);
    }
    std::vector<std::pair<std::string, int>> missing;
    for (const auto& seed : corpus) {
        for (int k = 1; k <= kChainsPerSeed; ++k) {
            if (!present.count({seed.lemma, k})) missing.emplace_back(seed.lemma, k);
        }
    }
    return missing;
}

std::vector<const AssociationChain*> ChainSet::chains_for(std::string_view lemma) const {
    std::vector<const AssociationChain*> out;
    for (const auto& c : chains) {
        if (c.seed.lemma == lemma) out.push_back(&c);
    }
    std::sort(out.begin(), out.end(), [](const AssociationChain* a, const AssociationChain* b) {
        return a->chain_index < b->chain_index;
    });
    return out;
}

std::vector<SeedWord> load_seed_corpus(const std::filesystem::path& path) {
    auto file = util::read_delimited(path);
    auto lcol = file.column("lemma");
    auto ccol = file.column("chapter");
    auto fcol = file.column("frequency_band");
    if (!lcol || !ccol || !fcol)
        throw std::runtime_error("seed corpus missing lemma/chapter/frequency_band columns");
    std::vector<SeedWord> seeds;
    for (const auto& row : file.rows) {
        if (row.size() < 3) throw std::runtime_error("short row in seed corpus");
        SeedWord s;
        s.lemma = util::trim(row[*lcol]);
        s.chapter = util::trim(row[*ccol]);
        s.frequency_band = std::stoi(row[*fcol]);
        if (s.lemma.empty()) throw std::runtime_error("empty lemma in seed corpus");
        seeds.push_back(std::move(s));
    }
    return seeds;
}

void require_canonical_corpus(const std::vector<SeedWord>& seeds) {
    if (seeds.size() != 110)
        throw std::runtime_error("canonical corpus must have 110 seeds, got " +
                                 std::to_string(seeds.size()));
    std::map<std::string, int> per_chapter;
    std::set<std::string> lemmas;
    for (const auto& s : seeds) {
        ++per_chapter[s.chapter];
        if (!lemmas.insert(s.lemma).second)
            throw std::runtime_error("duplicate seed lemma: " + s.lemma);
        if (s.frequency_band < 1 || s.frequency_band > 5)
            throw std::runtime_error("seed " + s.lemma + " has frequency band out of 1..5");
    }
    if (per_chapter.size() != 22)
        throw std::runtime_error("canonical corpus must span 22 chapters, got " +
                                 std::to_string(per_chapter.size()));
    for (const auto& [chapter, count] : per_chapter) {
        if (count != 5)
            throw std::runtime_error("chapter '" + chapter + "' has " + std::to_string(count) +
                                     " seeds, expected 5");
    }
}

// --- persistence -----------------------------------------------------------

namespace {

using json = nlohmann::ordered_json;

json seed_to_json(const SeedWord& s) {
    return json{{"lemma", s.lemma}, {"chapter", s.chapter}, {"frequency_band", s.frequency_band}};
}

SeedWord seed_from_json(const json& j) {
    SeedWord s;
    s.lemma = j.at("lemma").get<std::string>();
    s.chapter = j.value("chapter", "");
    s.frequency_band = j.value("frequency_band", 0);
    return s;
}

json chain_to_json(const AssociationChain& c) {
    json entries = json::array();
    for (const auto& e : c.entries) {
        entries.push_back(json{{"position", e.position},
                               {"word", e.word},
                               {"raw", e.raw},
                               {"reason", e.reason}});
    }
    json violations = json::array();
    for (const auto& v : c.validation.violations) {
        violations.push_back(json{{"kind", std::string(violation_kind_name(v.kind))},
                                  {"detail", v.detail},
                                  {"fatal", v.fatal}});
    }
    json out{{"seed", seed_to_json(c.seed)},
             {"chain_index", c.chain_index},
             {"temperature", c.temperature},
             {"transport", c.transport_id},
             {"timestamp", c.timestamp},
             {"response_digest", c.response_digest},
             {"valid", c.validation.valid},
             {"violations", violations},
             {"entries", entries}};
    if (!c.transition_types.empty()) out["types"] = c.transition_types;
    return out;
}

AssociationChain chain_from_json(const json& j, const std::string& subject_id) {
    AssociationChain c;
    c.subject_id = subject_id;
    c.seed = seed_from_json(j.at("seed"));
    c.chain_index = j.value("chain_index", 1);
    c.temperature = j.value("temperature", 0.0);
    c.transport_id = j.value("transport", "");
    c.timestamp = j.value("timestamp", "");
    c.response_digest = j.value("response_digest", "");
    for (const auto& e : j.at("entries")) {
        ChainEntry entry;
        entry.position = e.at("position").get<int>();
        entry.word = e.at("word").get<std::string>();
        entry.raw = e.value("raw", entry.word);
        entry.reason = e.value("reason", "");
        c.entries.push_back(std::move(entry));
    }
    c.validation.valid = j.value("valid", true);
    if (j.contains("violations")) {
        for (const auto& v : j.at("violations")) {
            auto kind = violation_kind_from_name(v.at("kind").get<std::string>());
            if (!kind) throw std::runtime_error("unknown violation kind in chain file");
            c.validation.violations.push_back(
                {*kind, v.value("detail", ""), v.value("fatal", false)});
        }
    }
    if (j.contains("types")) c.transition_types = j.at("types").get<std::vector<std::string>>();
    return c;
}

}  // namespace

std::string chain_set_to_json(const ChainSet& set) {
    json chains = json::array();
    for (const auto& c : set.chains) chains.push_back(chain_to_json(c));
    json doc{{"format", "pace-chains-v1"}, {"subject_id", set.subject_id}, {"chains", chains}};
    return doc.dump(2) + "\n";
}

ChainSet chain_set_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("format", "") != "pace-chains-v1")
        throw std::runtime_error("not a pace-chains-v1 document");
    ChainSet set;
    set.subject_id = doc.at("subject_id").get<std::string>();
    for (const auto& c : doc.at("chains")) {
        set.chains.push_back(chain_from_json(c, set.subject_id));
    }
    return set;
}

void save_chain_set(const ChainSet& set, const std::filesystem::path& path) {
    util::atomic_write_file(path, chain_set_to_json(set));
}

ChainSet load_chain_set(const std::filesystem::path& path) {
    return chain_set_from_json(util::read_text_file(path));
}

}  // namespace pace::chain
