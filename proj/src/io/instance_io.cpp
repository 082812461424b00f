#include "io/instance_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oppairs {

namespace {

using Json = nlohmann::ordered_json;

constexpr long long kMaxPrime = 1 << 20;
constexpr int kMaxDim = 64;

bool is_prime(long long p) {
    if (p < 2) return false;
    Int m = int_of(p);
    return mpz_probab_prime_p(m.get_mpz_t(), 40) != 0;
}

struct Errors {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& what) { list.push_back(path + ": " + what); }
    void raise_if_any() const {
        if (list.empty()) return;
        std::ostringstream os;
        for (size_t i = 0; i < list.size(); ++i) os << (i ? "; " : "") << list[i];
        throw std::invalid_argument(os.str());
    }
};

// accepts a JSON string in the textual coefficient format or a JSON integer
std::string entry_text(const Json& v, const std::string& path, Errors& err) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    err.add(path, "expected a coefficient string or integer");
    return "0";
}

Rat parse_rat_at(const Json& v, const std::string& path, Errors& err) {
    std::string t = entry_text(v, path, err);
    try {
        return parse_rat(t);
    } catch (const std::exception& e) {
        err.add(path, e.what());
        return Rat(0);
    }
}

ExtReal parse_ext_at(const Json& v, long long d, const std::string& path, Errors& err) {
    std::string t = entry_text(v, path, err);
    try {
        return parse_ext(t, d);
    } catch (const std::exception& e) {
        err.add(path, e.what());
        return ExtReal(0);
    }
}

template <class K, class ParseEntry>
QuadForm<K> parse_quad(const Json& q, int n, const std::string& path, Errors& err, ParseEntry&& entry) {
    QuadForm<K> out(n);
    if (!q.is_array() || static_cast<int>(q.size()) != n) {
        err.add(path, "expected " + std::to_string(n) + " upper-triangular rows");
        return out;
    }
    for (int i = 0; i < n; ++i) {
        const Json& row = q[i];
        std::string rpath = path + "/" + std::to_string(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n - i) {
            err.add(rpath, "expected " + std::to_string(n - i) + " entries");
            continue;
        }
        for (int j = i; j < n; ++j) out.c[i][j] = entry(row[j - i], rpath + "/" + std::to_string(j - i));
    }
    return out;
}

template <class K, class ParseEntry>
LinForm<K> parse_lin(const Json& l, int n, const std::string& path, Errors& err, ParseEntry&& entry) {
    Vec<K> c(n, K(0));
    if (!l.is_array() || static_cast<int>(l.size()) != n) {
        err.add(path, "expected " + std::to_string(n) + " entries");
        return LinForm<K>(c);
    }
    for (int i = 0; i < n; ++i) c[i] = entry(l[i], path + "/" + std::to_string(i));
    return LinForm<K>(c);
}

}  // namespace

PairInstance parse_instance(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("instance document: ") + e.what());
    }

    Errors err;
    if (!doc.is_object()) {
        err.add("/", "expected a JSON object");
        err.raise_if_any();
    }

    static const std::set<std::string> known{"label", "n", "d", "places", "forms"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) err.add("/" + key, "unknown key");

    PairInstance inst;
    if (doc.contains("label")) {
        if (doc["label"].is_string())
            inst.label = doc["label"].get<std::string>();
        else
            err.add("/label", "expected a string");
    }

    if (!doc.contains("n") || !doc["n"].is_number_integer())
        err.add("/n", "expected an integer dimension");
    else {
        long long n = doc["n"].get<long long>();
        if (n < 1 || n > kMaxDim)
            err.add("/n", "dimension must be between 1 and " + std::to_string(kMaxDim));
        else
            inst.n = static_cast<int>(n);
    }

    if (!doc.contains("d") || !doc["d"].is_number_integer())
        err.add("/d", "expected an integer");
    else {
        long long d = doc["d"].get<long long>();
        Int di = int_of(d);
        if (d < 2 || mpz_perfect_square_p(di.get_mpz_t()))
            err.add("/d", "d must be a non-square integer >= 2");
        else
            inst.d = d;
    }

    std::vector<long long> primes;
    if (!doc.contains("places") || !doc["places"].is_array())
        err.add("/places", "expected an array of primes");
    else {
        std::set<long long> seen;
        const Json& pl = doc["places"];
        for (size_t i = 0; i < pl.size(); ++i) {
            std::string path = "/places/" + std::to_string(i);
            if (!pl[i].is_number_integer()) {
                err.add(path, "expected an integer prime");
                continue;
            }
            long long p = pl[i].get<long long>();
            if (p > kMaxPrime)
                err.add(path, "prime exceeds the supported bound " + std::to_string(kMaxPrime));
            else if (!is_prime(p))
                err.add(path, std::to_string(p) + " is not prime");
            else if (!seen.insert(p).second)
                err.add(path, "duplicate place " + std::to_string(p));
            else
                primes.push_back(p);
        }
    }
    std::sort(primes.begin(), primes.end());

    if (inst.n == 0 || inst.d == 0) err.raise_if_any();

    if (!doc.contains("forms") || !doc["forms"].is_object()) {
        err.add("/forms", "expected an object with one entry per place");
        err.raise_if_any();
    }
    const Json& forms = doc["forms"];
    std::set<std::string> expected{"arch"};
    for (long long p : primes) expected.insert(std::to_string(p));
    for (const auto& [key, value] : forms.items())
        if (!expected.count(key)) err.add("/forms/" + key, "place not listed in /places");
    for (const std::string& key : expected)
        if (!forms.contains(key)) err.add("/forms/" + key, "missing forms for this place");
    err.raise_if_any();

    long long d = inst.d;
    {
        const Json& f = forms["arch"];
        std::string base = "/forms/arch";
        if (!f.is_object() || !f.contains("q") || !f.contains("l")) {
            err.add(base, "expected an object with keys q and l");
        } else {
            auto ext_entry = [&](const Json& v, const std::string& p) { return parse_ext_at(v, d, p, err); };
            inst.q_arch = parse_quad<ExtReal>(f["q"], inst.n, base + "/q", err, ext_entry);
            inst.l_arch = parse_lin<ExtReal>(f["l"], inst.n, base + "/l", err, ext_entry);
        }
    }
    for (long long p : primes) {
        const Json& f = forms[std::to_string(p)];
        std::string base = "/forms/" + std::to_string(p);
        if (!f.is_object() || !f.contains("q") || !f.contains("l")) {
            err.add(base, "expected an object with keys q and l");
            continue;
        }
        auto rat_entry = [&](const Json& v, const std::string& pt) { return parse_rat_at(v, pt, err); };
        FinitePlacePair fp;
        fp.p = p;
        fp.q = parse_quad<Rat>(f["q"], inst.n, base + "/q", err, rat_entry);
        fp.l = parse_lin<Rat>(f["l"], inst.n, base + "/l", err, rat_entry);
        inst.finite.push_back(std::move(fp));
    }
    err.raise_if_any();
    return inst;
}

std::string emit_instance(const PairInstance& inst) {
    Json doc = Json::object();
    if (!inst.label.empty()) doc["label"] = inst.label;
    doc["n"] = inst.n;
    doc["d"] = inst.d;
    std::vector<const FinitePlacePair*> fps;
    for (const FinitePlacePair& fp : inst.finite) fps.push_back(&fp);
    std::sort(fps.begin(), fps.end(), [](const FinitePlacePair* a, const FinitePlacePair* b) { return a->p < b->p; });
    Json places = Json::array();
    for (const FinitePlacePair* fp : fps) places.push_back(fp->p);
    doc["places"] = places;

    Json forms = Json::object();
    {
        Json q = Json::array();
        for (int i = 0; i < inst.n; ++i) {
            Json row = Json::array();
            for (int j = i; j < inst.n; ++j) row.push_back(emit_ext(inst.q_arch.c[i][j]));
            q.push_back(row);
        }
        Json l = Json::array();
        for (int i = 0; i < inst.n; ++i) l.push_back(emit_ext(inst.l_arch.c[i]));
        forms["arch"] = Json{{"q", q}, {"l", l}};
    }
    for (const FinitePlacePair* fp : fps) {
        Json q = Json::array();
        for (int i = 0; i < inst.n; ++i) {
            Json row = Json::array();
            for (int j = i; j < inst.n; ++j) row.push_back(emit_rat(fp->q.c[i][j]));
            q.push_back(row);
        }
        Json l = Json::array();
        for (int i = 0; i < inst.n; ++i) l.push_back(emit_rat(fp->l.c[i]));
        forms[std::to_string(fp->p)] = Json{{"q", q}, {"l", l}};
    }
    doc["forms"] = forms;
    return doc.dump(2) + "\n";
}

std::string instance_digest(const PairInstance& inst) {
    std::string text = emit_instance(inst);
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace oppairs
