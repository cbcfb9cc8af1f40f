#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mmf/dataio.hpp"

namespace mmf {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b  = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t                   p = 0;
    while (p < s.size())
    {
        while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p])))
            ++p;
        const auto b = p;
        while (p < s.size() && !std::isspace(static_cast<unsigned char>(s[p])))
            ++p;
        if (p > b)
            out.push_back(s.substr(b, p - b));
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line_no)
{
    T    v{};
    auto first = tok.data();
    if (!tok.empty() && tok.front() == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw parse_error("line " + std::to_string(line_no) + ": invalid number '" + std::string(tok) + "'");
    return v;
}

enum class Symmetry
{
    general,
    symmetric,
    skew
};

}// namespace

ParsedMatrix parse_matrix_market(std::string_view text)
{
    std::size_t pos = 0, line_no = 0;
    auto        next_line = [&](std::string_view &line) {
        if (pos >= text.size())
            return false;
        auto e = text.find('\n', pos);
        if (e == std::string_view::npos)
            e = text.size();
        line = text.substr(pos, e - pos);
        pos  = e + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line))
        throw parse_error("empty input");

    const auto head = split_ws(line);
    if (head.size() != 5 || lower(head[0]) != "%%matrixmarket")
        throw parse_error("malformed header: expected '%%MatrixMarket matrix coordinate real <symmetry>'");
    if (lower(head[1]) != "matrix")
        throw parse_error("unsupported object '" + std::string(head[1]) + "'");
    if (lower(head[2]) != "coordinate")
        throw parse_error("unsupported format '" + std::string(head[2]) + "' (only coordinate)");
    const auto field = lower(head[3]);
    if (field != "real")
        throw parse_error("unsupported field '" + field + "' (only real)");
    const auto sym_tok = lower(head[4]);
    Symmetry   sym;
    if (sym_tok == "general")
        sym = Symmetry::general;
    else if (sym_tok == "symmetric")
        sym = Symmetry::symmetric;
    else if (sym_tok == "skew-symmetric")
        sym = Symmetry::skew;
    else
        throw parse_error("unsupported symmetry '" + sym_tok + "'");

    MatrixMetadata meta;

    // comments, then the size line
    std::vector<std::string_view> size_tok;
    while (next_line(line))
    {
        const auto t = trim(line);
        if (t.empty())
            continue;
        if (t.front() == '%')
        {
            const auto body = trim(t.substr(1));
            if (body.starts_with("name:"))
            {
                const auto id = trim(body.substr(5));
                const auto sl = id.find('/');
                if (sl != std::string_view::npos)
                {
                    meta.group = std::string(id.substr(0, sl));
                    meta.name  = std::string(id.substr(sl + 1));
                }
                else
                    meta.name = std::string(id);
            }
            else if (body.starts_with("kind:"))
                meta.kind = std::string(trim(body.substr(5)));
            continue;
        }
        size_tok = split_ws(t);
        break;
    }
    if (size_tok.size() != 3)
        throw parse_error("line " + std::to_string(line_no) + ": expected size line 'rows cols nnz'");

    const auto rows = parse_number<long long>(size_tok[0], line_no);
    const auto cols = parse_number<long long>(size_tok[1], line_no);
    const auto nnz  = parse_number<long long>(size_tok[2], line_no);
    if (rows < 1 || cols < 1 || nnz < 0)
        throw parse_error("line " + std::to_string(line_no) + ": invalid size line");
    if (rows != cols)
        throw not_square_error("matrix is " + std::to_string(rows) + " x " + std::to_string(cols) + ", not square");
    const index_t n = static_cast<index_t>(rows);

    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(sym == Symmetry::general ? nnz : 2 * nnz));
    long long seen = 0;
    while (next_line(line))
    {
        const auto t = trim(line);
        if (t.empty() || t.front() == '%')
            continue;
        if (seen == nnz)
            throw parse_error("line " + std::to_string(line_no) + ": more entries than declared");
        const auto tok = split_ws(t);
        if (tok.size() != 3)
            throw parse_error("line " + std::to_string(line_no) + ": expected 'row col value'");
        const auto i = parse_number<long long>(tok[0], line_no);
        const auto j = parse_number<long long>(tok[1], line_no);
        const auto v = parse_number<double>(tok[2], line_no);
        if (i < 1 || i > n || j < 1 || j > n)
            throw parse_error("line " + std::to_string(line_no) + ": index out of range");
        if (!std::isfinite(v))
            throw parse_error("line " + std::to_string(line_no) + ": non-finite value");
        const index_t r = static_cast<index_t>(i - 1), c = static_cast<index_t>(j - 1);

        entries.push_back({r, c, v});
        if (r != c && sym == Symmetry::symmetric)
            entries.push_back({c, r, v});
        else if (sym == Symmetry::skew)
        {
            if (r == c)
            {
                if (v != 0.0)
                    throw parse_error("line " + std::to_string(line_no) + ": nonzero diagonal in skew-symmetric file");
            }
            else
                entries.push_back({c, r, -v});
        }
        ++seen;
    }
    if (seen != nnz)
        throw parse_error("expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen));

    ParsedMatrix out;
    try
    {
        out.matrix = SquareMatrix::sparse(n, std::move(entries));
    }
    catch (const std::invalid_argument &e)
    {
        throw parse_error(e.what());
    }
    meta.n                  = n;
    meta.nnz                = out.matrix.nnz();
    meta.numerical_symmetry = numerical_symmetry(out.matrix);
    out.meta                = std::move(meta);
    return out;
}

ParsedMatrix read_matrix_market(const std::filesystem::path &file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw parse_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix_market(ss.str());
}

std::string write_matrix_market(const SquareMatrix &A, std::string_view comment)
{
    const auto  e = A.entries();
    std::string out;
    out.reserve(64 + e.size() * 40);
    out += "%%MatrixMarket matrix coordinate real general\n";
    std::size_t p = 0;
    while (!comment.empty() && p <= comment.size())
    {
        auto q = comment.find('\n', p);
        if (q == std::string_view::npos)
            q = comment.size();
        out += "% ";
        out += comment.substr(p, q - p);
        out += '\n';
        p = q + 1;
    }
    out += std::to_string(A.size()) + " " + std::to_string(A.size()) + " " + std::to_string(e.size()) + "\n";
    char buf[96];
    for (const auto &x : e)
    {
        std::snprintf(buf, sizeof buf, "%td %td %.17g\n", x.row + 1, x.col + 1, x.value);
        out += buf;
    }
    return out;
}

MatrixRef parse_matrix_ref(std::string_view text)
{
    const auto t  = trim(text);
    const auto sl = t.find('/');
    if (sl == std::string_view::npos || sl == 0 || sl + 1 == t.size() || t.find('/', sl + 1) != std::string_view::npos)
        throw std::invalid_argument("expected 'group/name', got '" + std::string(t) + "'");
    MatrixRef ref{std::string(t.substr(0, sl)), std::string(t.substr(sl + 1))};
    auto      ok = [](const std::string &s) {
        return std::all_of(s.begin(), s.end(),
                                [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c == '.'; })
            && s != "." && s != "..";
    };
    if (!ok(ref.group) || !ok(ref.name))
        throw std::invalid_argument("invalid characters in matrix reference '" + std::string(t) + "'");
    return ref;
}

std::vector<MatrixRef> read_manifest(const std::filesystem::path &file)
{
    std::ifstream in(file);
    if (!in)
        throw std::invalid_argument("cannot open manifest " + file.string());
    std::vector<MatrixRef> out;
    std::string            line;
    while (std::getline(in, line))
    {
        const auto hash = line.find('#');
        const auto t    = trim(std::string_view(line).substr(0, hash));
        if (!t.empty())
            out.push_back(parse_matrix_ref(t));
    }
    return out;
}

}// namespace mmf
