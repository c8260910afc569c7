#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "canonical.hpp"
#include "jet.hpp"
#include "matrix_jet.hpp"
#include "operator.hpp"
#include "rational.hpp"
#include "transform.hpp"

namespace itercanon {

/// Tree documents keep keys in insertion order so printing is canonical.
using Document = nlohmann::ordered_json;

/// Malformed input: syntax errors carry "source:line:column", field errors the field path.
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Document parse_document(std::string_view text, std::string_view source = "<input>")
{
    try {
        return Document::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is the 1-based offset of the offending character
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string detail = e.what();
        if (const auto pos = detail.rfind(": "); pos != std::string::npos)
            detail = detail.substr(pos + 2);
        throw DocumentError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                            ": invalid JSON: " + detail);
    }
}

inline Document read_document(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DocumentError(path + ": cannot open file");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_document(text, path);
}

inline std::string print_document(const Document& doc) { return doc.dump(2) + "\n"; }

namespace detail {

[[noreturn]] inline void field_error(const std::string& where, const std::string& what)
{
    throw DocumentError("field " + where + ": " + what);
}

inline const Document& require(const Document& obj, const std::string& key, const std::string& where)
{
    if (!obj.is_object())
        field_error(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        field_error(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

inline std::string index(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

inline void expect_kind(const Document& doc, std::string_view kind)
{
    const Document& k = require(doc, "kind", "");
    if (!k.is_string() || k.get<std::string>() != kind)
        field_error("kind", "expected \"" + std::string(kind) + "\"");
}

inline long read_integer(const Document& node, const std::string& where, long min_value)
{
    if (!node.is_number_integer())
        field_error(where, "expected an integer");
    const long value = node.get<long>();
    if (value < min_value)
        field_error(where, "must be at least " + std::to_string(min_value));
    return value;
}

inline Rational read_rational(const Document& node, const std::string& where)
{
    if (!node.is_string())
        field_error(where, "expected a rational string \"p/q\"");
    try {
        return parse_rational(node.get<std::string>());
    } catch (const std::invalid_argument&) {
        field_error(where, "\"" + node.get<std::string>() + "\" is not a rational \"p/q\"");
    }
}

inline Rational read_base_point(const Document& doc)
{
    const auto it = doc.find("base_point");
    return it == doc.end() ? Rational(0) : read_rational(*it, "base_point");
}

/// Longer lists are an error unless `clip` (a truncation override) is set.
inline Jet read_jet(const Document& node, const std::string& where, int order, const Rational& base, bool clip = false)
{
    if (!node.is_array() || node.empty())
        field_error(where, "expected a non-empty list of Taylor coefficients");
    if (!clip && node.size() > static_cast<std::size_t>(order) + 1)
        field_error(where, "has " + std::to_string(node.size()) + " coefficients, truncation " +
                               std::to_string(order) + " allows " + std::to_string(order + 1));
    std::vector<Rational> c(static_cast<std::size_t>(order) + 1);
    for (std::size_t k = 0; k < node.size(); ++k) {
        const Rational value = read_rational(node[k], index(where, k));
        if (k < c.size())
            c[k] = value;
    }
    return Jet(std::move(c), base);
}

inline MatrixJet read_matrix_jet(const Document& node, const std::string& where, std::size_t dim, int order,
                                 const Rational& base, bool clip = false)
{
    if (!node.is_array() || node.size() != dim)
        field_error(where, "expected " + std::to_string(dim) + " rows");
    std::vector<Jet> e;
    for (std::size_t i = 0; i < dim; ++i) {
        const Document& row = node[i];
        if (!row.is_array() || row.size() != dim)
            field_error(index(where, i), "expected " + std::to_string(dim) + " entries");
        for (std::size_t j = 0; j < dim; ++j)
            e.push_back(read_jet(row[j], index(index(where, i), j), order, base, clip));
    }
    return MatrixJet(dim, std::move(e));
}

inline RationalMatrix read_constant_matrix(const Document& node, const std::string& where)
{
    if (!node.is_array() || node.empty())
        field_error(where, "expected a square matrix of rational strings");
    const std::size_t dim = node.size();
    RationalMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const Document& row = node[i];
        if (!row.is_array() || row.size() != dim)
            field_error(index(where, i), "expected " + std::to_string(dim) + " entries");
        for (std::size_t j = 0; j < dim; ++j)
            out(i, j) = read_rational(row[j], index(index(where, i), j));
    }
    return out;
}

/// Truncation of a document, or the override when one is given.
inline int read_truncation(const Document& doc, std::optional<int> override_order)
{
    if (override_order) {
        if (*override_order < 0)
            field_error("truncation", "override must be non-negative");
        return *override_order;
    }
    return static_cast<int>(read_integer(require(doc, "truncation", ""), "truncation", 0));
}

} // namespace detail

/// Ascending Taylor coefficients as rational strings, trailing zeros dropped.
inline Document jet_to_document(const Jet& jet)
{
    const auto& c = jet.coefficients();
    std::size_t len = c.size();
    while (len > 1 && sgn(c[len - 1]) == 0)
        --len;
    Document out = Document::array();
    for (std::size_t k = 0; k < std::max<std::size_t>(len, 1); ++k)
        out.push_back(k < c.size() ? format_rational(c[k]) : std::string("0"));
    return out;
}

inline Document matrix_jet_to_document(const MatrixJet& m)
{
    Document rows = Document::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Document row = Document::array();
        for (std::size_t j = 0; j < m.dim(); ++j)
            row.push_back(jet_to_document(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Document constant_matrix_to_document(const RationalMatrix& m)
{
    Document rows = Document::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Document row = Document::array();
        for (std::size_t j = 0; j < m.dim(); ++j)
            row.push_back(format_rational(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// {"kind": "system", "order": n, "dim": m, "truncation": N, "base_point": x0, "B": [B_1, ..., B_n]}
inline LinearSystem system_from_document(const Document& doc, std::optional<int> truncation = std::nullopt)
{
    using namespace detail;
    expect_kind(doc, "system");
    const int n = static_cast<int>(read_integer(require(doc, "order", ""), "order", 1));
    const auto dim = static_cast<std::size_t>(read_integer(require(doc, "dim", ""), "dim", 1));
    const int order = read_truncation(doc, truncation);
    const Rational base = read_base_point(doc);
    const Document& b = require(doc, "B", "");
    if (!b.is_array() || b.size() != static_cast<std::size_t>(n))
        field_error("B", "expected " + std::to_string(n) + " coefficient matrices");
    std::vector<MatrixJet> coeffs;
    for (std::size_t k = 0; k < b.size(); ++k)
        coeffs.push_back(read_matrix_jet(b[k], index("B", k), dim, order, base, truncation.has_value()));
    return LinearSystem(dim, std::move(coeffs));
}

inline Document system_to_document(const LinearSystem& sys)
{
    const int order = sys.order();
    Document b = Document::array();
    for (int k = 1; k <= sys.n(); ++k)
        b.push_back(matrix_jet_to_document(sys.b(k).truncated(order)));
    Document doc;
    doc["kind"] = "system";
    doc["order"] = sys.n();
    doc["dim"] = sys.dim();
    doc["truncation"] = order;
    doc["base_point"] = format_rational(sys.base_point());
    doc["B"] = std::move(b);
    return doc;
}

/// {"kind": "operator", "dim": m, "truncation": N, "base_point": x0, "R": ..., "S": ...}
inline DiffOperator operator_from_document(const Document& doc, std::optional<int> truncation = std::nullopt)
{
    using namespace detail;
    expect_kind(doc, "operator");
    const auto dim = static_cast<std::size_t>(read_integer(require(doc, "dim", ""), "dim", 1));
    const int order = read_truncation(doc, truncation);
    const Rational base = read_base_point(doc);
    const bool clip = truncation.has_value();
    return DiffOperator(read_matrix_jet(require(doc, "R", ""), "R", dim, order, base, clip),
                        read_matrix_jet(require(doc, "S", ""), "S", dim, order, base, clip));
}

inline Document operator_to_document(const DiffOperator& psi)
{
    Document doc;
    doc["kind"] = "operator";
    doc["dim"] = psi.dim();
    doc["truncation"] = psi.order();
    doc["base_point"] = format_rational(psi.r().base_point());
    doc["R"] = matrix_jet_to_document(psi.r());
    doc["S"] = matrix_jet_to_document(psi.s());
    return doc;
}

/// {"kind": "transform", "f": [...], "T": [[...]]} or the normal-form shorthand
/// {"kind": "transform", "f": [...], "C": [[...]], "n": n}. "truncation" and
/// "base_point" (of z) are optional; `default_order` fills a missing truncation.
inline PointTransformation transform_from_document(const Document& doc, int default_order,
                                                   std::optional<int> truncation = std::nullopt)
{
    using namespace detail;
    expect_kind(doc, "transform");
    const int order = truncation ? read_truncation(doc, truncation)
                      : doc.contains("truncation") ? read_truncation(doc, std::nullopt)
                                                   : default_order;
    const Rational base = read_base_point(doc);
    const bool clip = truncation.has_value() || !doc.contains("truncation");
    const Jet f = read_jet(require(doc, "f", ""), "f", order, base, clip);
    const bool has_t = doc.contains("T");
    const bool has_c = doc.contains("C");
    if (has_t == has_c)
        field_error("T", "give exactly one of \"T\" or \"C\" with \"n\"");
    if (has_t) {
        const Document& t = doc["T"];
        if (!t.is_array() || t.empty())
            field_error("T", "expected a square matrix of coefficient lists");
        return PointTransformation(f, read_matrix_jet(t, "T", t.size(), order, base, clip));
    }
    const int n = static_cast<int>(read_integer(require(doc, "n", ""), "n", 1));
    return PointTransformation::normal_form(f, read_constant_matrix(doc["C"], "C"), n);
}

inline Document transform_to_document(const PointTransformation& tr)
{
    const int order = std::min(tr.f().order(), tr.t().order());
    Document doc;
    doc["kind"] = "transform";
    doc["truncation"] = order;
    doc["base_point"] = format_rational(tr.f().base_point());
    doc["f"] = jet_to_document(tr.f().truncated(order));
    doc["T"] = matrix_jet_to_document(tr.t().truncated(order));
    return doc;
}

/// Source data of an iterative equation: exactly one of "q" or "r".
struct SourceData {
    std::optional<Jet> q;
    std::optional<Jet> r;
};

/// {"kind": "source", "truncation": N, "base_point": x0, "q": [...]} (or "r").
inline SourceData source_from_document(const Document& doc, std::optional<int> truncation = std::nullopt)
{
    using namespace detail;
    expect_kind(doc, "source");
    const int order = read_truncation(doc, truncation);
    const Rational base = read_base_point(doc);
    const bool has_q = doc.contains("q");
    if (has_q == doc.contains("r"))
        field_error("q", "give exactly one of \"q\" or \"r\"");
    const bool clip = truncation.has_value();
    SourceData out;
    if (has_q)
        out.q = read_jet(doc["q"], "q", order, base, clip);
    else
        out.r = read_jet(doc["r"], "r", order, base, clip);
    return out;
}

inline Document form_to_document(const LinearForm& form)
{
    int order = form.k(0).order();
    for (const auto& k : form.coefficients())
        order = std::min(order, k.order());
    Document ks = Document::array();
    for (const auto& k : form.coefficients())
        ks.push_back(matrix_jet_to_document(k.truncated(order)));
    Document doc;
    doc["kind"] = "form";
    doc["order"] = form.n();
    doc["dim"] = form.dim();
    doc["truncation"] = order;
    doc["base_point"] = format_rational(form.k(0).base_point());
    doc["K"] = std::move(ks);
    return doc;
}

inline Document verdict_to_document(const CanonicalVerdict& v)
{
    Document doc;
    doc["kind"] = "verdict";
    doc["canonical_class"] = v.is_canonical_class;
    doc["truncation"] = v.order;
    doc["q"] = v.q ? jet_to_document(v.q->truncated(std::min(v.q->order(), v.order))) : Document();
    if (v.witness) {
        Document w;
        w["j"] = v.witness->j;
        w["row"] = v.witness->row;
        w["col"] = v.witness->col;
        w["reason"] = std::string(to_string(v.witness->reason));
        doc["witness"] = std::move(w);
    } else {
        doc["witness"] = Document();
    }
    return doc;
}

} // namespace itercanon
