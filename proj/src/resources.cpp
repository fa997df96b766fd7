#include "stance/resources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stance/common.hpp"

namespace stance {

// ---------------------------------------------------------------------------
// Embeddings

const Vector* EmbeddingTable::find(std::string_view word) const {
    auto it = table_.find(to_lower_ascii(word));
    return it == table_.end() ? nullptr : &it->second;
}

bool EmbeddingTable::insert(std::string_view word, Vector v) {
    if (v.size() != dim_) throw Error("embedding dimension mismatch for '" + std::string(word) + "'");
    auto [it, inserted] = table_.insert_or_assign(to_lower_ascii(word), std::move(v));
    return inserted;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) parts.push_back(line.substr(start, i - start));
    }
    return parts;
}

bool parse_double(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_integer(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable parse_embeddings(std::istream& in) {
    EmbeddingTable table;
    bool first = true;  // no vector seen yet
    bool first_line = true;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto parts = split_ws(line);
        if (parts.empty()) continue;
        if (first_line && parts.size() == 2 && is_integer(parts[0]) && is_integer(parts[1])) {
            first_line = false;
            continue;  // "<count> <dim>" header
        }
        first_line = false;
        if (parts.size() < 2) throw ParseError("embedding line without components", line_no);
        const std::size_t dim = parts.size() - 1;
        if (first) {
            table = EmbeddingTable(dim);
            first = false;
        } else if (dim != table.dimension()) {
            throw ParseError("embedding has " + std::to_string(dim) + " components, expected " +
                                 std::to_string(table.dimension()),
                             line_no);
        }
        Vector v(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            if (!parse_double(parts[k + 1], v[k])) {
                throw ParseError("non-numeric embedding component '" + std::string(parts[k + 1]) + "'", line_no);
            }
        }
        if (!table.insert(parts[0], std::move(v))) {
            log::warn("duplicate embedding for '" + std::string(parts[0]) + "' on line " + std::to_string(line_no) +
                      "; last entry wins");
        }
    }
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embeddings '" + path.string() + "'");
    return parse_embeddings(in);
}

// ---------------------------------------------------------------------------
// Brown clusters

std::optional<std::size_t> BrownTable::cluster(std::string_view word) const {
    auto it = words_.find(to_lower_ascii(word));
    if (it == words_.end()) return std::nullopt;
    return it->second;
}

BrownTable parse_brown(std::istream& in) {
    BrownTable table;
    std::unordered_map<std::string, std::size_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos) throw ParseError("expected bitstring<TAB>word<TAB>count", line_no);
        const std::string bits = line.substr(0, tab1);
        const std::string word =
            to_lower_ascii(line.substr(tab1 + 1, tab2 == std::string::npos ? std::string::npos : tab2 - tab1 - 1));
        if (bits.empty() || word.empty()) throw ParseError("empty bitstring or word", line_no);

        auto [id_it, new_cluster] = ids.emplace(bits, ids.size());
        if (new_cluster && ids.size() > BrownTable::kClusterCount) {
            throw ParseError("more than " + std::to_string(BrownTable::kClusterCount) + " distinct clusters", line_no);
        }
        auto [w_it, new_word] = table.words_.emplace(word, id_it->second);
        if (!new_word && w_it->second != id_it->second) {
            throw ParseError("word '" + word + "' listed under two different bitstrings", line_no);
        }
    }
    table.clusters_ = ids.size();
    return table;
}

BrownTable load_brown(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open Brown clusters '" + path.string() + "'");
    return parse_brown(in);
}

// ---------------------------------------------------------------------------
// Vector primitives

Vector cumulative_vector(std::span<const std::string> tokens, const EmbeddingTable& table) {
    Vector sum(table.dimension(), 0.0);
    std::size_t found = 0;
    for (const auto& t : tokens) {
        const Vector* v = table.find(t);
        if (!v) continue;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
        ++found;
    }
    if (found > 0) {
        for (double& x : sum) x /= static_cast<double>(found);
    }
    return sum;
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error("cosine of vectors with lengths " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        dot += u[k] * v[k];
        nu += u[k] * u[k];
        nv += v[k] * v[k];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Bundle

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open word list '" + path.string() + "'");
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t");
        words.push_back(to_lower_ascii(line.substr(b, e - b + 1)));
    }
    return words;
}

namespace {

WordList named_list(const std::filesystem::path& dir, const std::string& file, std::string name) {
    WordList l{std::move(name), read_word_list(dir / (file + ".txt"))};
    if (l.words.empty()) throw Error("word list '" + (dir / (file + ".txt")).string() + "' is empty");
    return l;
}

std::unordered_set<std::string> word_set(const std::filesystem::path& path) {
    auto words = read_word_list(path);
    return {words.begin(), words.end()};
}

std::vector<std::pair<std::string, std::string>> read_tsv_pairs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected two tab-separated fields in '" + path.string() + "'", line_no);
        rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return rows;
}

}  // namespace

std::uint64_t hash_directory(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(std::filesystem::relative(e.path(), dir));
    }
    std::sort(files.begin(), files.end());
    std::uint64_t h = kFnvOffset;
    for (const auto& rel : files) {
        h = fnv1a64(rel.generic_string(), h);
        h = fnv1a64(std::string_view("\0", 1), h);
        std::ifstream in(dir / rel, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        h = fnv1a64(buf.str(), h);
    }
    return h;
}

ResourceBundle load_bundle(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error("resource bundle '" + dir.string() + "' is not a directory");
    ResourceBundle r;
    r.root = dir;
    r.embeddings = load_embeddings(dir / "embeddings.txt");
    r.brown = load_brown(dir / "brown.tsv");

    const auto lists = dir / "lists";
    auto& lex = r.lexicon;
    lex.surprise = named_list(lists, "surprise", "surprise");
    lex.doubt = named_list(lists, "doubt", "doubt");
    lex.no_doubt = named_list(lists, "nodoubt", "no_doubt");
    lex.support = named_list(lists, "support", "support");
    for (std::size_t i = 0; i < kMoodNames.size(); ++i) lex.moods[i] = named_list(lists, kMoodNames[i], kMoodNames[i]);
    const auto interrogatives = read_word_list(lists / "interrogatives.txt");
    lex.interrogatives = {interrogatives.begin(), interrogatives.end()};

    for (const auto& [word, polarity] : read_tsv_pairs(lists / "sentiment.tsv")) {
        int p = 0;
        auto [ptr, ec] = std::from_chars(polarity.data(), polarity.data() + polarity.size(), p);
        if (ec != std::errc{} || ptr != polarity.data() + polarity.size() || p < -2 || p > 2) {
            throw Error("sentiment polarity for '" + word + "' must be an integer in [-2, 2]");
        }
        lex.sentiment[to_lower_ascii(word)] = p;
    }

    const auto dicts = dir / "dicts";
    for (const auto& [category, emoticon] : read_tsv_pairs(dicts / "emoticons.tsv")) {
        lex.emoticons[category].insert(emoticon);
        lex.all_emoticons.insert(emoticon);
    }
    lex.slang = word_set(dicts / "slang.txt");
    lex.google_bad = word_set(dicts / "google_bad.txt");
    lex.acronyms = word_set(dicts / "acronyms.txt");

    std::ifstream rx(dir / "regex.txt");
    if (!rx) throw Error("cannot open '" + (dir / "regex.txt").string() + "'");
    std::string line;
    while (std::getline(rx, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            lex.regexes.push_back({line, std::regex(line, std::regex::ECMAScript | std::regex::icase | std::regex::optimize)});
        } catch (const std::regex_error& e) {
            throw Error("invalid pattern '" + line + "' in regex.txt: " + e.what());
        }
    }
    if (lex.regexes.size() != LexiconSet::kRegexCount) {
        throw Error("regex.txt must hold exactly " + std::to_string(LexiconSet::kRegexCount) + " patterns, found " +
                    std::to_string(lex.regexes.size()));
    }

    r.gazetteers = text::Gazetteers::load(dir / "gazetteers");
    r.content_hash = hash_directory(dir);
    return r;
}

}  // namespace stance
