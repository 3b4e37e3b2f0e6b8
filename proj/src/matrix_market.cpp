#include "kreiss/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "kreiss/error.hpp"

namespace kreiss {

namespace {

struct Line {
    std::string text;
    long number; // 1-based
};

struct Token {
    std::string text;
    long column; // 1-based
};

std::vector<Token> split(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        out.push_back({s.substr(start, i - start), static_cast<long>(start) + 1});
    }
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(const std::string& source, long line, long column, const std::string& msg) {
    throw Error(ErrorKind::parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
}

double parse_real(const std::string& source, const Line& line, const Token& tok) {
    double v = 0.0;
    const char* b = tok.text.data();
    const char* e = b + tok.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v))
        fail(source, line.number, tok.column, "expected a finite number, got '" + tok.text + "'");
    return v;
}

long parse_index(const std::string& source, const Line& line, const Token& tok, long upper, long lo = 1) {
    long v = 0;
    const char* b = tok.text.data();
    const char* e = b + tok.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(source, line.number, tok.column, "expected an integer, got '" + tok.text + "'");
    if (v < lo || v > upper)
        fail(source, line.number, tok.column,
             "value " + tok.text + " out of range " + std::to_string(lo) + ".." + std::to_string(upper));
    return v;
}

CMatrix parse_block(const std::vector<Line>& lines, std::size_t begin, std::size_t end, const std::string& source) {
    if (begin >= end) fail(source, 1, 1, "empty input");
    const Line& head = lines[begin];
    const auto h = split(head.text);
    if (h.empty() || lower(h[0].text) != "%%matrixmarket")
        fail(source, head.number, 1, "missing %%MatrixMarket header");
    if (h.size() != 5) fail(source, head.number, 1, "header needs object, format, field and symmetry");
    if (lower(h[1].text) != "matrix") fail(source, head.number, h[1].column, "unsupported object '" + h[1].text + "'");
    const std::string format = lower(h[2].text);
    const std::string field = lower(h[3].text);
    const std::string symmetry = lower(h[4].text);
    if (format != "array" && format != "coordinate")
        fail(source, head.number, h[2].column, "unsupported format '" + h[2].text + "'");
    if (field != "real" && field != "integer" && field != "complex")
        fail(source, head.number, h[3].column, "unsupported field '" + h[3].text + "'");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric")
        fail(source, head.number, h[4].column, "unsupported symmetry '" + h[4].text + "'");
    if (symmetry == "hermitian" && field != "complex")
        fail(source, head.number, h[4].column, "hermitian symmetry requires complex field");
    const bool is_complex = field == "complex";
    const std::size_t values_per_entry = is_complex ? 2 : 1;

    std::size_t i = begin + 1;
    auto next_data = [&]() -> const Line* {
        while (i < end) {
            const Line& l = lines[i++];
            const auto first = l.text.find_first_not_of(" \t\r");
            if (first == std::string::npos || l.text[first] == '%') continue;
            return &l;
        }
        return nullptr;
    };

    const Line* size_line = next_data();
    if (!size_line) fail(source, lines[end - 1].number + 1, 1, "missing size line");
    const auto st = split(size_line->text);
    const std::size_t want = format == "array" ? 2 : 3;
    if (st.size() != want) fail(source, size_line->number, 1, "size line needs " + std::to_string(want) + " integers");
    const long big = 1L << 30;
    const long rows = parse_index(source, *size_line, st[0], big);
    const long cols = parse_index(source, *size_line, st[1], big);
    if (rows != cols)
        throw Error(ErrorKind::invalid_matrix, source + ":" + std::to_string(size_line->number) +
                                                   ": matrix must be square, got " + std::to_string(rows) + "x" +
                                                   std::to_string(cols));
    const long n = rows;
    Dense m = Dense::Zero(n, n);

    auto read_value = [&](const Line& l, const std::vector<Token>& t, std::size_t at) -> Complex {
        const double re = parse_real(source, l, t[at]);
        const double im = is_complex ? parse_real(source, l, t[at + 1]) : 0.0;
        return {re, im};
    };
    auto place = [&](long r, long c, Complex v, const Line& l) {
        m(r, c) = v;
        if (r == c) {
            if (symmetry == "skew-symmetric" && v != Complex(0.0))
                fail(source, l.number, 1, "skew-symmetric diagonal must be zero");
            if (symmetry == "hermitian" && v.imag() != 0.0)
                fail(source, l.number, 1, "hermitian diagonal must be real");
            return;
        }
        if (symmetry == "symmetric") m(c, r) = v;
        else if (symmetry == "hermitian") m(c, r) = std::conj(v);
        else if (symmetry == "skew-symmetric") m(c, r) = -v;
    };

    if (format == "array") {
        const bool general = symmetry == "general";
        for (long c = 0; c < n; ++c) {
            for (long r = general ? 0 : (symmetry == "skew-symmetric" ? c + 1 : c); r < n; ++r) {
                const Line* l = next_data();
                if (!l) fail(source, lines[end - 1].number + 1, 1, "unexpected end of data");
                const auto t = split(l->text);
                if (t.size() != values_per_entry)
                    fail(source, l->number, t.empty() ? 1 : t.back().column,
                         "expected " + std::to_string(values_per_entry) + " value(s) per line");
                place(r, c, read_value(*l, t, 0), *l);
            }
        }
    } else {
        const long nnz = parse_index(source, *size_line, st[2], n * n, 0);
        for (long k = 0; k < nnz; ++k) {
            const Line* l = next_data();
            if (!l) fail(source, lines[end - 1].number + 1, 1, "unexpected end of data");
            const auto t = split(l->text);
            if (t.size() != 2 + values_per_entry)
                fail(source, l->number, t.empty() ? 1 : t.back().column,
                     "expected " + std::to_string(2 + values_per_entry) + " fields per entry");
            const long r = parse_index(source, *l, t[0], n) - 1;
            const long c = parse_index(source, *l, t[1], n) - 1;
            if (symmetry != "general" && r < c) fail(source, l->number, t[0].column, "entry above the diagonal");
            place(r, c, read_value(*l, t, 2), *l);
        }
    }
    if (const Line* extra = next_data()) fail(source, extra->number, 1, "trailing data");
    return CMatrix(std::move(m));
}

std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string s;
    long number = 0;
    while (std::getline(in, s)) lines.push_back({s, ++number});
    return lines;
}

std::ifstream open(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return f;
}

bool is_header(const std::string& s) { return lower(s.substr(0, 14)) == "%%matrixmarket"; }

} // namespace

CMatrix read_matrix_market(std::istream& in, const std::string& source) {
    const auto lines = read_lines(in);
    std::size_t begin = 0;
    while (begin < lines.size() && lines[begin].text.find_first_not_of(" \t\r") == std::string::npos) ++begin;
    return parse_block(lines, begin, lines.size(), source);
}

CMatrix read_matrix_market_file(const std::string& path) {
    auto f = open(path);
    return read_matrix_market(f, path);
}

void write_matrix_market(std::ostream& out, const CMatrix& m) {
    out << "%%MatrixMarket matrix array complex general\n" << m.n() << ' ' << m.n() << '\n';
    char buf[96];
    for (Eigen::Index c = 0; c < m.n(); ++c)
        for (Eigen::Index r = 0; r < m.n(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", m(r, c).real(), m(r, c).imag());
            out << buf;
        }
}

SymbolTable read_symbol_table(std::istream& in, const std::string& source) {
    const auto lines = read_lines(in);
    std::vector<std::size_t> heads;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (is_header(lines[i].text)) heads.push_back(i);
    if (heads.empty()) fail(source, 1, 1, "no %%MatrixMarket blocks");

    SymbolTable table;
    std::size_t prev_end = 0;
    for (std::size_t b = 0; b < heads.size(); ++b) {
        const std::size_t head = heads[b];
        std::optional<std::vector<double>> xi;
        for (std::size_t i = prev_end; i < head; ++i) {
            const std::string& t = lines[i].text;
            const auto pos = t.find("xi:");
            if (t.rfind('%', 0) != 0 || pos == std::string::npos) continue;
            std::vector<double> v;
            for (const Token& tok : split(t.substr(pos + 3))) {
                Token shifted = tok;
                shifted.column += static_cast<long>(pos) + 3;
                v.push_back(parse_real(source, lines[i], shifted));
            }
            if (v.empty()) fail(source, lines[i].number, static_cast<long>(pos) + 1, "xi comment has no values");
            xi = v;
        }
        if (!xi) fail(source, lines[head].number, 1, "block lacks a preceding '% xi:' comment");
        const std::size_t end = b + 1 < heads.size() ? heads[b + 1] : lines.size();
        // The next block's xi comment belongs to it, so stop parsing at the first one.
        std::size_t stop = end;
        for (std::size_t i = head + 1; i < end; ++i)
            if (lines[i].text.rfind('%', 0) == 0 && lines[i].text.find("xi:") != std::string::npos) {
                stop = i;
                break;
            }
        table.xi.push_back(*xi);
        table.matrices.push_back(parse_block(lines, head, stop, source));
        prev_end = stop;
    }
    return table;
}

SymbolTable read_symbol_table_file(const std::string& path) {
    auto f = open(path);
    return read_symbol_table(f, path);
}

} // namespace kreiss
