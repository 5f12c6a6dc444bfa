#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qboson/bplus.hpp"
#include "qboson/cartan.hpp"
#include "qboson/rational.hpp"
#include "qboson/scalar.hpp"
#include "qboson/version.hpp"
#include "qboson/weight.hpp"

namespace qboson {

using json = nlohmann::json;

/// Malformed input file: syntax or shape. Carries a 1-based position when
/// the underlying JSON parser reported one (0 otherwise).
struct FileError : std::runtime_error {
    int line = 0;
    int col = 0;
    FileError(const std::string& msg, int l = 0, int c = 0)
        : std::runtime_error(msg), line(l), col(c) {}
};

namespace detail_io {

inline std::pair<int, int> line_col(const std::string& text, size_t byte) {
    // byte is the 1-based offset the JSON parser reports
    int line = 1, col = 1;
    for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline void reject_floats(const json& j, const std::string& where) {
    if (j.is_number_float())
        throw FileError("non-exact number at " + where +
                        "; use integers or \"p/q\" strings");
    if (j.is_object())
        for (auto it = j.begin(); it != j.end(); ++it)
            reject_floats(it.value(), where + "." + it.key());
    if (j.is_array())
        for (size_t i = 0; i < j.size(); ++i)
            reject_floats(j[i], where + "[" + std::to_string(i) + "]");
}

} // namespace detail_io

inline json parse_json_text(const std::string& text) {
    try {
        json j = json::parse(text);
        detail_io::reject_floats(j, "$");
        return j;
    } catch (const json::parse_error& e) {
        auto [line, col] = detail_io::line_col(text, e.byte);
        std::string what = e.what();
        // the library prefixes "[json.exception.parse_error.101] ": drop it
        size_t cut = what.find("] ");
        if (cut != std::string::npos) what = what.substr(cut + 2);
        throw FileError(what + " (line " + std::to_string(line) + ", column " +
                            std::to_string(col) + ")",
                        line, col);
    }
}

/// A parsed datum file. `validation` carries the mathematical acceptance of
/// the bilinear form (shape problems throw FileError instead); the optional
/// coefficient vector is filled only when the form validated.
struct DatumFile {
    ValidationResult validation;
    bool has_a = false;
    std::vector<Scalar> a; // per index; entry 0 is fixed to 1
};

inline DatumFile parse_datum_json(const json& j) {
    if (!j.is_object()) throw FileError("datum file: top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "labels" && it.key() != "form" && it.key() != "a")
            throw FileError("datum file: unknown key \"" + it.key() + "\"");
    if (!j.contains("labels") || !j["labels"].is_array())
        throw FileError("datum file: \"labels\" must be an array of strings");
    if (!j.contains("form") || !j["form"].is_array())
        throw FileError("datum file: \"form\" must be an array of rows");

    std::vector<std::string> labels;
    for (const json& l : j["labels"]) {
        if (!l.is_string()) throw FileError("datum file: labels must be strings");
        labels.push_back(l.get<std::string>());
    }

    auto entry_to_rational = [](const json& e, const std::string& where) {
        if (e.is_number_integer()) return Rational(e.get<long>());
        if (e.is_string()) {
            try {
                return rat_parse(e.get<std::string>());
            } catch (const std::exception& ex) {
                throw FileError("datum file: bad rational at " + where + ": " +
                                ex.what());
            }
        }
        throw FileError("datum file: form entries must be integers or \"p/q\" strings (" +
                        where + ")");
    };

    std::vector<std::vector<Rational>> form;
    for (size_t r = 0; r < j["form"].size(); ++r) {
        const json& row = j["form"][r];
        if (!row.is_array()) throw FileError("datum file: form rows must be arrays");
        std::vector<Rational> out;
        for (size_t c = 0; c < row.size(); ++c)
            out.push_back(entry_to_rational(
                row[c], "form[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
        form.push_back(std::move(out));
    }

    DatumFile df;
    df.validation = validate_datum(labels, form);
    if (!j.contains("a")) return df;

    df.has_a = true;
    if (!j["a"].is_object())
        throw FileError("datum file: \"a\" must map labels to coefficient strings");
    if (!df.validation.ok()) return df; // coefficients need the validated datum's D

    const CartanDatum& d = *df.validation.datum;
    df.a.assign(static_cast<size_t>(d.n()), Scalar(1));
    std::vector<bool> seen(static_cast<size_t>(d.n()), false);
    for (auto it = j["a"].begin(); it != j["a"].end(); ++it) {
        int idx = d.label_index(it.key());
        if (idx < 0)
            throw FileError("datum file: \"a\" names unknown label \"" + it.key() + "\"");
        if (idx == 0)
            throw FileError(
                "datum file: the coefficient of the first index is fixed to 1");
        std::string sval;
        if (it.value().is_string())
            sval = it.value().get<std::string>();
        else if (it.value().is_number_integer())
            sval = std::to_string(it.value().get<long long>());
        else
            throw FileError("datum file: coefficient for \"" + it.key() +
                            "\" must be a string or integer");
        try {
            df.a[static_cast<size_t>(idx)] = parse_scalar(sval, d.D);
        } catch (const std::exception& ex) {
            throw FileError("datum file: bad coefficient for \"" + it.key() + "\": " +
                            ex.what());
        }
        seen[static_cast<size_t>(idx)] = true;
    }
    for (int i = 1; i < d.n(); ++i)
        if (!seen[static_cast<size_t>(i)])
            throw FileError("datum file: \"a\" is missing label \"" +
                            d.labels[static_cast<size_t>(i)] + "\"");
    return df;
}

inline DatumFile load_datum_path(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_datum_json(parse_json_text(buf.str()));
}

// ---- datum fingerprint -----------------------------------------------------

/// FNV-1a over the canonical serialization of labels and form. The optional
/// coefficient vector is deliberately excluded: slice bases depend only on
/// the form, so cached bases are shared across coefficient choices.
inline std::string datum_hash(const CartanDatum& d) {
    std::string s = "labels=[";
    for (size_t i = 0; i < d.labels.size(); ++i) {
        if (i) s += ",";
        s += d.labels[i];
    }
    s += "];form=[";
    for (size_t r = 0; r < d.form.size(); ++r) {
        if (r) s += ";";
        for (size_t c = 0; c < d.form[r].size(); ++c) {
            if (c) s += ",";
            s += rat_str(d.form[r][c]);
        }
    }
    s += "]";
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

// ---- slice cache -----------------------------------------------------------

inline std::string weight_tag(const Weight& wt) {
    std::string s = "w";
    for (size_t i = 0; i < wt.size(); ++i) {
        if (i) s += "_";
        s += std::to_string(wt[i]);
    }
    return s;
}

inline std::string cache_file_path(const std::string& dir, const CartanDatum& d,
                                   const Weight& wt) {
    return dir + "/" + datum_hash(d) + "-" + weight_tag(wt) + ".json";
}

struct CacheResult {
    bool hit = false;        // an intact cached slice was adopted
    bool recomputed = false; // a file existed but was unusable
    std::string path;
};

/// Adopt the cached reduction of one weight slice, or compute and store it.
/// A corrupt cache file is reported on stderr, recomputed, and overwritten.
inline CacheResult load_or_compute(BPlus& alg, const Weight& wt, const std::string& dir) {
    namespace fs = std::filesystem;
    CacheResult res;
    res.path = cache_file_path(dir, alg.datum(), wt);
    fs::create_directories(dir);

    if (fs::exists(res.path)) {
        try {
            std::ifstream in(res.path, std::ios::binary);
            if (!in) throw FileError("cannot read cache file");
            std::ostringstream buf;
            buf << in.rdbuf();
            json j = parse_json_text(buf.str());
            if (!j.is_object() || !j.contains("basis") || !j.contains("proj") ||
                !j.contains("monomials") || !j.contains("rank"))
                throw FileError("cache file: expected monomials, rank, basis, proj");

            std::vector<EWord> monomials = words_of_weight(wt);
            if (j["monomials"] != json(monomials))
                throw FileError("cache file: monomial list does not match the weight");
            DegreeBasis db;
            db.weight = wt;
            db.monomials = monomials;
            int prev = -1;
            for (const json& b : j["basis"]) {
                if (!b.is_number_integer()) throw FileError("cache file: basis indices");
                int idx = b.get<int>();
                if (idx <= prev || idx >= static_cast<int>(monomials.size()))
                    throw FileError("cache file: basis indices out of order or range");
                db.basis.push_back(idx);
                prev = idx;
            }
            if (!j["rank"].is_number_integer() ||
                j["rank"].get<long>() != static_cast<long>(db.basis.size()))
                throw FileError("cache file: rank disagrees with the pivot set");
            if (!j["proj"].is_array() || j["proj"].size() != monomials.size())
                throw FileError("cache file: proj row count");
            for (const json& row : j["proj"]) {
                if (!row.is_array() || row.size() != db.basis.size())
                    throw FileError("cache file: proj row width");
                Row out;
                for (const json& cell : row) {
                    if (!cell.is_string()) throw FileError("cache file: proj entries");
                    out.push_back(parse_scalar(cell.get<std::string>(), alg.datum().D));
                }
                db.proj.push_back(std::move(out));
            }
            alg.adopt(db);
            res.hit = true;
            return res;
        } catch (const std::exception& e) {
            std::cerr << "warning: ignoring corrupt cache file " << res.path << ": "
                      << e.what() << "\n";
            res.recomputed = true;
        }
    }

    const DegreeBasis& db = alg.degree_basis(wt);
    json j;
    j["monomials"] = db.monomials;
    j["rank"] = db.rank();
    j["basis"] = db.basis;
    json proj = json::array();
    for (const Row& row : db.proj) {
        json r = json::array();
        for (const Scalar& s : row) r.push_back(s.str(alg.datum().D));
        proj.push_back(std::move(r));
    }
    j["proj"] = std::move(proj);
    std::ofstream out(res.path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write cache file " + res.path);
    out << j.dump(1) << "\n";
    return res;
}

// ---- reports ----------------------------------------------------------------

/// Shared envelope for machine-readable command output. Keys serialize
/// alphabetically, so repeated runs are byte-identical.
inline json report_envelope(const std::string& command, const std::string& hash,
                            int truncation, std::optional<std::uint64_t> seed) {
    json j;
    j["command"] = command;
    j["datum_hash"] = hash;
    j["tool"] = json{{"name", kToolName}, {"version", kToolVersion}};
    if (truncation >= 0) j["truncation"] = truncation;
    if (seed) j["seed"] = *seed;
    return j;
}

inline std::string render_json(const json& rep) { return rep.dump(2) + "\n"; }

namespace detail_io {

inline bool is_primitive(const json& j) {
    return !j.is_object() && !j.is_array();
}

inline std::string primitive_str(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

inline bool all_primitive(const json& arr) {
    for (const json& e : arr)
        if (!is_primitive(e)) return false;
    return true;
}

inline void render_text_node(std::ostream& os, const json& j, int indent);

inline void render_array_inline(std::ostream& os, const json& arr) {
    os << "[";
    for (size_t i = 0; i < arr.size(); ++i) {
        if (i) os << ", ";
        os << primitive_str(arr[i]);
    }
    os << "]";
}

inline void render_text_node(std::ostream& os, const json& j, int indent) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << pad << it.key() << ":";
            const json& v = it.value();
            if (is_primitive(v)) {
                os << " " << primitive_str(v) << "\n";
            } else if (v.is_array() && all_primitive(v)) {
                os << " ";
                render_array_inline(os, v);
                os << "\n";
            } else {
                os << "\n";
                render_text_node(os, v, indent + 1);
            }
        }
    } else if (j.is_array()) {
        for (const json& e : j) {
            if (is_primitive(e)) {
                os << pad << "- " << primitive_str(e) << "\n";
            } else if (e.is_array() && all_primitive(e)) {
                os << pad << "- ";
                render_array_inline(os, e);
                os << "\n";
            } else {
                os << pad << "-\n";
                render_text_node(os, e, indent + 1);
            }
        }
    } else {
        os << pad << primitive_str(j) << "\n";
    }
}

} // namespace detail_io

inline std::string render_text(const json& rep) {
    std::ostringstream os;
    detail_io::render_text_node(os, rep, 0);
    return os.str();
}

/// Parse a comma-separated multidegree like "2,1,0".
inline Weight parse_weight_arg(const std::string& s, int n) {
    Weight wt;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        try {
            size_t used = 0;
            int v = std::stoi(cur, &used);
            while (used < cur.size() && std::isspace(static_cast<unsigned char>(cur[used])))
                ++used;
            if (used != cur.size() || v < 0) throw std::invalid_argument("");
            wt.push_back(v);
        } catch (const std::exception&) {
            throw FileError("bad multidegree component \"" + cur + "\"");
        }
    }
    if (static_cast<int>(wt.size()) != n)
        throw FileError("multidegree needs " + std::to_string(n) + " components");
    return wt;
}

} // namespace qboson
