#include "problem.hpp"

#include <cctype>
#include <optional>
#include <regex>
#include <sstream>

#include "awb/expr.hpp"

namespace wb {

using namespace awb;

DslError::DslError(Kind kind, int line, int column, const std::string& what)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

[[noreturn]] void syntax(int line, int col, const std::string& msg) { throw DslError(DslError::parse, line, col, msg); }
[[noreturn]] void semantic(int line, int col, const std::string& msg) { throw DslError(DslError::semantic, line, col, msg); }

struct Stmt {
    std::string text;
    int line = 0, col = 1;
    // Body statements of a { ... } block, if any.
    std::vector<Stmt> body;
    bool has_block = false;
};

struct Word {
    std::string text;
    int col;
};

bool is_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits a file into statements; `{ ... }` bodies may span lines and use ';' or newlines.
std::vector<Stmt> split_statements(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        lines.push_back(cur);
    }
    for (auto& l : lines) {
        auto h = l.find('#');
        if (h != std::string::npos) l = l.substr(0, h);
    }
    std::vector<Stmt> out;
    Stmt* block = nullptr;
    auto push_pieces = [&](const std::string& s, int line, int offset, std::vector<Stmt>& dst) {
        std::size_t start = 0;
        while (start <= s.size()) {
            std::size_t semi = s.find(';', start);
            std::string piece = s.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
            std::string t = trim(piece);
            if (!t.empty()) {
                int col = offset + static_cast<int>(start + piece.find_first_not_of(" \t")) + 1;
                dst.push_back(Stmt{t, line, col, {}, false});
            }
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line = static_cast<int>(i) + 1;
        std::string s = lines[i];
        int offset = 0;
        while (true) {
            if (block) {
                auto close = s.find('}');
                if (close == std::string::npos) {
                    push_pieces(s, line, offset, block->body);
                    break;
                }
                push_pieces(s.substr(0, close), line, offset, block->body);
                block = nullptr;
                std::string rest = s.substr(close + 1);
                if (!trim(rest).empty()) syntax(line, offset + static_cast<int>(close) + 2, "unexpected text after '}'");
                break;
            }
            std::string t = trim(s);
            if (t.empty()) break;
            int col = offset + static_cast<int>(s.find_first_not_of(" \t")) + 1;
            if (t[0] == '}') syntax(line, col, "unmatched '}'");
            auto open = s.find('{');
            if (open == std::string::npos) {
                if (s.find(';') != std::string::npos) syntax(line, offset + static_cast<int>(s.find(';')) + 1, "';' outside a block");
                out.push_back(Stmt{t, line, col, {}, false});
                break;
            }
            out.push_back(Stmt{trim(s.substr(0, open)), line, col, {}, true});
            block = &out.back();
            offset += static_cast<int>(open) + 1;
            s = s.substr(open + 1);
        }
    }
    if (block) syntax(block->line, block->col, "block is not closed");
    return out;
}

std::vector<Word> words(const std::string& s, int col0) {
    std::vector<Word> w;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        w.push_back({s.substr(i, j - i), col0 + static_cast<int>(i)});
        i = j;
    }
    return w;
}

// ------------------------------------------------------------ tensor expressions

struct Val {
    std::optional<MixedTensor> t;
    RatFn s;
};

struct TensorEval {
    const BundlePtr& b;
    int line0, col0;

    [[noreturn]] void fail(const Expr& e, const std::string& msg) const { semantic(e.line, e.column, msg); }

    static std::string degree(const MixedTensor& t) {
        return "(p=" + std::to_string(t.p()) + ", q=" + std::to_string(t.q()) + ")";
    }

    MixedTensor lift(const Val& v, const MixedTensor& like, const Expr& e) const {
        if (v.t) return *v.t;
        if (v.s.is_zero()) return MixedTensor(b, like.p(), like.q());
        if (like.p() == 0 && like.q() == 0) return MixedTensor::scalar(b, v.s);
        fail(e, "cannot add a function to a tensor of degree " + degree(like));
    }

    Val sum(const Val& x, const Val& y, bool minus, const Expr& e) const {
        if (!x.t && !y.t) return {std::nullopt, minus ? x.s - y.s : x.s + y.s};
        const MixedTensor& like = x.t ? *x.t : *y.t;
        MixedTensor a = lift(x, like, e), c = lift(y, like, e);
        if (a.p() != c.p() || a.q() != c.q()) fail(e, "degree mismatch: " + degree(a) + " and " + degree(c));
        return {minus ? a - c : a + c, {}};
    }

    Val operator()(const Expr& e) const {
        switch (e.kind) {
            case Expr::Kind::number: return {std::nullopt, RatFn(e.value)};
            case Expr::Kind::variable: {
                const Chart& ch = *b->chart;
                for (std::size_t j = 0; j < b->frame.size(); ++j)
                    if (b->frame[j] == e.name) return {MixedTensor::frame(b, static_cast<int>(j)), {}};
                for (std::size_t s = 0; s < ch.vars.size(); ++s) {
                    if (ch.vars[s].name() == e.name) return {std::nullopt, RatFn::variable(ch.vars[s])};
                    if ("d" + ch.vars[s].name() == e.name) return {MixedTensor::dx(b, static_cast<int>(s)), {}};
                }
                fail(e, "unknown name '" + e.name + "' (not a coordinate, differential or frame element of " + ch.name + ")");
            }
            case Expr::Kind::add: return sum((*this)(e.kids[0]), (*this)(e.kids[1]), false, e);
            case Expr::Kind::sub: return sum((*this)(e.kids[0]), (*this)(e.kids[1]), true, e);
            case Expr::Kind::negate: {
                Val v = (*this)(e.kids[0]);
                if (v.t) return {-*v.t, {}};
                return {std::nullopt, -v.s};
            }
            case Expr::Kind::mul: {
                Val x = (*this)(e.kids[0]), y = (*this)(e.kids[1]);
                if (!x.t && !y.t) return {std::nullopt, x.s * y.s};
                if (!x.t) return {y.t->scaled(x.s), {}};
                if (!y.t) return {x.t->scaled(y.s), {}};
                return {wedge(*x.t, *y.t), {}};
            }
            case Expr::Kind::div: {
                Val x = (*this)(e.kids[0]), y = (*this)(e.kids[1]);
                if (y.t) fail(e.kids[1], "cannot divide by a tensor");
                if (y.s.is_zero()) fail(e.kids[1], "division by zero");
                if (x.t) return {x.t->scaled(RatFn(1L) / y.s), {}};
                return {std::nullopt, x.s / y.s};
            }
            case Expr::Kind::power: {
                Val x = (*this)(e.kids[0]);
                if (x.t) fail(e, "powers of tensors are not defined; use '*' for the wedge product");
                return {std::nullopt, x.s.pow(e.exponent)};
            }
        }
        fail(e, "bad expression");
    }
};

Expr syntax_of(std::string_view text, int line, int col) {
    try {
        return parse_syntax(text, line, col);
    } catch (const ParseError& e) {
        syntax(e.line(), e.column(), e.message());
    }
}

RatFn eval_scalar(std::string_view text, const ChartPtr& chart, int line, int col) {
    MixedTensor t = eval_tensor(text, tangent_bundle(chart), line, col);
    if (t.p() != 0 || t.q() != 0) semantic(line, col, "expected a function, got a tensor");
    return t.is_zero() ? RatFn() : t.scalar_value();
}

// "[a, b, c]" split at top-level commas; returns pieces with their columns.
std::vector<std::pair<std::string, int>> bracket_list(const std::string& s, int line, int col) {
    std::string t = trim(s);
    int lead = col + static_cast<int>(s.find_first_not_of(" \t"));
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') syntax(line, lead, "expected a list in brackets");
    std::vector<std::pair<std::string, int>> out;
    int depth = 0;
    std::size_t start = 1;
    for (std::size_t i = 1; i + 1 <= t.size(); ++i) {
        char c = t[i];
        bool end = i + 1 == t.size();
        if (c == '(' || c == '[') ++depth;
        if ((c == ')' || c == ']') && !end) --depth;
        if ((c == ',' && depth == 0) || end) {
            std::string piece = t.substr(start, i - start);
            if (trim(piece).empty()) syntax(line, lead + static_cast<int>(i), "empty list entry");
            out.emplace_back(piece, lead + static_cast<int>(start));
            start = i + 1;
        }
    }
    return out;
}

// "(q=1, p=2)" or "(p=1, q=1)"
std::pair<int, int> parse_type(const std::string& s, const char* first, const char* second, int line, int col) {
    std::regex re(std::string("\\(\\s*") + first + "\\s*=\\s*(\\d+)\\s*,\\s*" + second + "\\s*=\\s*(\\d+)\\s*\\)");
    std::smatch m;
    if (!std::regex_match(s, m, re))
        syntax(line, col, std::string("expected type (") + first + "=N, " + second + "=N)");
    return {std::stoi(m[1]), std::stoi(m[2])};
}

class Parser {
public:
    Problem P;

    void statement(const Stmt& st) {
        auto w = words(st.text, st.col);
        const std::string& kw = w[0].text;
        try {
            if (kw == "chart")
                chart(st, w);
            else if (kw == "algebroid")
                algebroid(st, w);
            else if (kw == "tensor")
                tensor(st, w);
            else if (kw == "im")
                im(st, w);
            else if (kw == "task")
                task(st, w);
            else
                syntax(st.line, st.col, "unknown statement '" + kw + "'");
        } catch (const DslError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            semantic(st.line, st.col, e.what());
        }
        if (st.has_block && kw != "algebroid" && kw != "im") syntax(st.line, st.col, "'" + kw + "' takes no block");
    }

private:
    void need(const Stmt& st, const std::vector<Word>& w, std::size_t i, const char* what) {
        if (w.size() <= i) syntax(st.line, st.col + static_cast<int>(st.text.size()), std::string("expected ") + what);
    }
    void expect(const Stmt& st, const std::vector<Word>& w, std::size_t i, const std::string& kw) {
        need(st, w, i, ("'" + kw + "'").c_str());
        if (w[i].text != kw) syntax(st.line, w[i].col, "expected '" + kw + "', got '" + w[i].text + "'");
    }
    std::string name_at(const Stmt& st, const std::vector<Word>& w, std::size_t i) {
        need(st, w, i, "a name");
        if (!is_ident(w[i].text)) syntax(st.line, w[i].col, "bad name '" + w[i].text + "'");
        return w[i].text;
    }
    // Text of the statement after the first '=' and its column.
    std::pair<std::string, int> rhs(const Stmt& st) {
        auto eq = st.text.find('=');
        if (eq == std::string::npos) syntax(st.line, st.col, "expected '='");
        return {st.text.substr(eq + 1), st.col + static_cast<int>(eq) + 1};
    }
    template <class M>
    void fresh(const M& map, const std::string& name, const Stmt& st, const char* kind) {
        if (map.count(name)) semantic(st.line, st.col, std::string(kind) + " '" + name + "' is already declared");
    }
    const ChartPtr& chart_ref(const std::string& name, const Stmt& st, int col) {
        auto it = P.charts.find(name);
        if (it == P.charts.end()) semantic(st.line, col, "unknown chart '" + name + "'");
        return it->second;
    }

    void chart(const Stmt& st, const std::vector<Word>& w) {
        std::string name = name_at(st, w, 1);
        fresh(P.charts, name, st, "chart");
        std::size_t i = 2;
        int dim = -1;
        if (w.size() > i && w[i].text == "dim") {
            need(st, w, i + 1, "a dimension");
            try {
                dim = std::stoi(w[i + 1].text);
            } catch (...) {
                syntax(st.line, w[i + 1].col, "bad dimension");
            }
            i += 2;
        }
        expect(st, w, i, "vars");
        std::vector<std::string> vars;
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            if (!is_ident(w[j].text) || w[j].text.find('-') != std::string::npos) syntax(st.line, w[j].col, "bad variable name");
            for (const auto& v : vars)
                if (v == w[j].text) semantic(st.line, w[j].col, "variable '" + v + "' repeated");
            vars.push_back(w[j].text);
        }
        if (vars.empty()) syntax(st.line, st.col, "a chart needs at least one variable");
        if (dim >= 0 && dim != static_cast<int>(vars.size()))
            semantic(st.line, st.col, "chart " + name + " has dim " + std::to_string(dim) + " but " + std::to_string(vars.size()) + " variables");
        P.charts[name] = make_chart(name, vars);
    }

    void check_frame_names(const ChartPtr& c, const std::vector<std::string>& frame, const Stmt& st) {
        for (const auto& f : frame) {
            for (Symbol v : c->vars)
                if (f == v.name() || f == "d" + v.name())
                    semantic(st.line, st.col, "frame name '" + f + "' clashes with a coordinate or its differential");
            if (!is_ident(f) || f.find('-') != std::string::npos) syntax(st.line, st.col, "bad frame name '" + f + "'");
        }
    }

    void algebroid(const Stmt& st, const std::vector<Word>& w) {
        std::string name = name_at(st, w, 1);
        fresh(P.algebroids, name, st, "algebroid");
        need(st, w, 2, "'=' or 'over'");
        if (w[2].text == "=") {
            if (st.has_block) syntax(st.line, st.col, "unexpected block");
            need(st, w, 3, "'tangent' or 'cotangent'");
            if (w[3].text == "tangent") {
                need(st, w, 4, "a chart");
                const ChartPtr& c = chart_ref(w[4].text, st, w[4].col);
                auto base = Algebroid::tangent(c);
                P.algebroids[name] = Algebroid::make_raw(name, base->bundle(), base->anchor_matrix(), base->table());
                if (w.size() > 5) syntax(st.line, w[5].col, "unexpected '" + w[5].text + "'");
            } else if (w[3].text == "cotangent") {
                need(st, w, 4, "a bivector");
                const MixedTensor& pi = P.tensor(w[4].text, st.line);
                if (pi.p() != 0 || pi.q() != 2 || pi.n() != pi.m())
                    semantic(st.line, w[4].col, "'" + w[4].text + "' is not a bivector on a tangent bundle");
                std::vector<std::string> frame;
                if (w.size() > 5) {
                    expect(st, w, 5, "frame");
                    for (std::size_t j = 6; j < w.size(); ++j) frame.push_back(w[j].text);
                } else {
                    for (int j = 0; j < pi.m(); ++j) frame.push_back("e" + std::to_string(j + 1));
                }
                if (static_cast<int>(frame.size()) != pi.m()) semantic(st.line, st.col, "frame needs one name per coordinate");
                check_frame_names(pi.chart(), frame, st);
                auto base = cotangent_algebroid(pi, frame);
                auto A = Algebroid::make_raw(name, base->bundle(), base->anchor_matrix(), base->table());
                P.bivector_of[A.get()] = pi;
                P.algebroids[name] = A;
            } else {
                syntax(st.line, w[3].col, "expected 'tangent' or 'cotangent'");
            }
            return;
        }
        // algebroid A over M rank n frame e1 .. en { anchor e = [..]; bracket [a,b] = .. }
        expect(st, w, 2, "over");
        need(st, w, 3, "a chart");
        const ChartPtr& c = chart_ref(w[3].text, st, w[3].col);
        expect(st, w, 4, "rank");
        need(st, w, 5, "a rank");
        int n = 0;
        try {
            n = std::stoi(w[5].text);
        } catch (...) {
            syntax(st.line, w[5].col, "bad rank");
        }
        expect(st, w, 6, "frame");
        std::vector<std::string> frame;
        for (std::size_t j = 7; j < w.size(); ++j) frame.push_back(w[j].text);
        if (static_cast<int>(frame.size()) != n) semantic(st.line, st.col, "rank " + std::to_string(n) + " but " + std::to_string(frame.size()) + " frame names");
        check_frame_names(c, frame, st);
        BundlePtr b = make_bundle(c, frame);
        auto index = [&](const std::string& f, int col, int line) {
            for (int k = 0; k < n; ++k)
                if (frame[u(k)] == f) return k;
            semantic(line, col, "unknown frame element '" + f + "'");
        };
        Algebroid::Matrix anchor(u(n), std::vector<RatFn>(u(c->dim())));
        Algebroid::Table upper(u(n), std::vector<std::vector<RatFn>>(u(n), std::vector<RatFn>(u(n))));
        std::set<std::pair<int, int>> seen;
        for (const Stmt& s : st.body) {
            auto bw = words(s.text, s.col);
            if (bw[0].text == "anchor") {
                need(s, bw, 1, "a frame element");
                int k = index(bw[1].text, bw[1].col, s.line);
                auto [list, col] = rhs(s);
                auto items = bracket_list(list, s.line, col);
                if (static_cast<int>(items.size()) != c->dim())
                    semantic(s.line, col, "anchor row needs " + std::to_string(c->dim()) + " entries");
                for (std::size_t j = 0; j < items.size(); ++j) anchor[u(k)][j] = eval_scalar(items[j].first, c, s.line, items[j].second);
            } else if (bw[0].text == "bracket") {
                static const std::regex re(R"(bracket\s*\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]\s*=.*)");
                std::smatch m;
                if (!std::regex_match(s.text, m, re)) syntax(s.line, s.col, "expected 'bracket [a, b] = section'");
                int i = index(m[1], s.col, s.line), j = index(m[2], s.col, s.line);
                if (i == j) semantic(s.line, s.col, "[a, a] is zero by skewness");
                if (!seen.insert({std::min(i, j), std::max(i, j)}).second) semantic(s.line, s.col, "bracket given twice");
                auto [expr, col] = rhs(s);
                MixedTensor v = eval_tensor(expr, b, s.line, col);
                if (!v.is_zero() && (v.p() != 0 || v.q() != 1)) semantic(s.line, col, "a bracket value must be a section");
                auto comps = v.is_zero() ? std::vector<RatFn>(u(n)) : v.section_components();
                for (int k = 0; k < n; ++k) upper[u(std::min(i, j))][u(std::max(i, j))][u(k)] = i < j ? comps[u(k)] : -comps[u(k)];
            } else {
                syntax(s.line, s.col, "expected 'anchor' or 'bracket'");
            }
        }
        P.algebroids[name] = Algebroid::make(name, b, anchor, upper);
    }

    void tensor(const Stmt& st, const std::vector<Word>& w) {
        std::string name = name_at(st, w, 1);
        fresh(P.tensors, name, st, "tensor");
        need(st, w, 2, "'on' or '='");
        if (w[2].text == "=") {
            // tensor K = endo M [[..],[..]]: the (1,1) vector-valued form with that matrix
            need(st, w, 3, "'endo'");
            if (w[3].text != "endo") syntax(st.line, w[3].col, "expected 'endo' or 'on'");
            need(st, w, 4, "a chart");
            const ChartPtr& c = chart_ref(w[4].text, st, w[4].col);
            std::size_t at = st.text.find('[');
            if (at == std::string::npos) syntax(st.line, st.col, "expected a matrix");
            auto rows = bracket_list(st.text.substr(at), st.line, st.col + static_cast<int>(at));
            if (static_cast<int>(rows.size()) != c->dim()) semantic(st.line, st.col, "matrix needs " + std::to_string(c->dim()) + " rows");
            Endo M;
            for (const auto& [row, col] : rows) {
                auto items = bracket_list(row, st.line, col);
                if (static_cast<int>(items.size()) != c->dim()) semantic(st.line, col, "matrix row needs " + std::to_string(c->dim()) + " entries");
                std::vector<RatFn> r;
                for (const auto& [e, ec] : items) r.push_back(eval_scalar(e, c, st.line, ec));
                M.push_back(r);
            }
            P.tensors[name] = vv_from_matrix(c, M);
            return;
        }
        expect(st, w, 2, "on");
        need(st, w, 3, "an algebroid");
        const AlgebroidPtr& A = P.algebroid(w[3].text, st.line);
        auto [expr, col] = rhs(st);
        std::optional<std::pair<int, int>> type;
        auto tpos = st.text.find("type");
        auto eq = st.text.find('=');
        if (tpos != std::string::npos && tpos < eq) {
            std::string clause = trim(st.text.substr(tpos + 4, eq - tpos - 4));
            type = parse_type(clause, "p", "q", st.line, st.col + static_cast<int>(tpos));
        }
        MixedTensor t = eval_tensor(expr, A->bundle(), st.line, col);
        if (type) {
            if (t.is_zero())
                t = MixedTensor(A->bundle(), type->first, type->second);
            else if (t.p() != type->first || t.q() != type->second)
                semantic(st.line, col, "value has degree (p=" + std::to_string(t.p()) + ", q=" + std::to_string(t.q()) + ")");
        } else if (t.is_zero() && t.p() == 0 && t.q() == 0) {
            semantic(st.line, col, "the degree of 0 is ambiguous; add type (p=.., q=..)");
        }
        P.tensors[name] = t;
    }

    void im(const Stmt& st, const std::vector<Word>& w) {
        std::string name = name_at(st, w, 1);
        fresh(P.ims, name, st, "im");
        need(st, w, 2, "'on' or '='");
        if (w[2].text == "=") {
            if (st.has_block) syntax(st.line, st.col, "unexpected block");
            need(st, w, 3, "a construction");
            const std::string& how = w[3].text;
            auto arg = [&](std::size_t i) -> const Word& {
                need(st, w, i, "an argument");
                return w[i];
            };
            auto arity = [&](std::size_t n) {
                if (w.size() > n) syntax(st.line, w[n].col, "unexpected '" + w[n].text + "'");
            };
            if (how == "coboundary") {
                arity(6);
                const AlgebroidPtr& A = P.algebroid(arg(4).text, st.line);
                P.ims[name] = coboundary(A, P.tensor(arg(5).text, st.line));
            } else if (how == "dr") {
                arity(6);
                const AlgebroidPtr& A = P.algebroid(arg(4).text, st.line);
                if (!P.bivector_of.count(A.get())) semantic(st.line, arg(4).col, "'" + arg(4).text + "' is not a cotangent algebroid");
                P.ims[name] = dr_operator(A, P.tensor(arg(5).text, st.line));
            } else if (how == "power") {
                arity(6);
                int k = 0;
                try {
                    k = std::stoi(arg(5).text);
                } catch (...) {
                    syntax(st.line, arg(5).col, "bad exponent");
                }
                P.ims[name] = im11_power(P.im(arg(4).text, st.line), k);
            } else if (how == "bracket") {
                arity(6);
                P.ims[name] = imvv_bracket(P.im(arg(4).text, st.line), P.im(arg(5).text, st.line));
            } else if (how == "nijenhuis") {
                arity(5);
                P.ims[name] = nijenhuis_components(P.im(arg(4).text, st.line));
            } else if (how == "projection-of") {
                arity(5);
                P.ims[name] = product_to_projection(P.im(arg(4).text, st.line));
            } else {
                syntax(st.line, w[3].col, "unknown construction '" + how + "'");
            }
            return;
        }
        // im T on A type (q=.., p=..) { D e = ..; l e = ..; r dx = .. }
        expect(st, w, 2, "on");
        need(st, w, 3, "an algebroid");
        const AlgebroidPtr& A = P.algebroid(w[3].text, st.line);
        expect(st, w, 4, "type");
        auto tpos = st.text.find("type");
        auto [q, p] = parse_type(trim(st.text.substr(tpos + 4)), "q", "p", st.line, st.col + static_cast<int>(tpos));
        const BundlePtr& b = A->bundle();
        std::vector<MixedTensor> D(u(A->n()), MixedTensor(b, p, q)), l, r;
        if (p >= 1) l.assign(u(A->n()), MixedTensor(b, p - 1, q));
        if (q >= 1) r.assign(u(A->m()), MixedTensor(b, p, q - 1));
        for (const Stmt& s : st.body) {
            auto bw = words(s.text, s.col);
            const std::string& which = bw[0].text;
            need(s, bw, 1, "a frame element or differential");
            auto [expr, col] = rhs(s);
            MixedTensor v = eval_tensor(expr, b, s.line, col);
            auto place = [&](std::vector<MixedTensor>& dst, std::size_t k, int dp, int dq, const char* what) {
                if (dp < 0 || dq < 0) semantic(s.line, bw[0].col, std::string(what) + " has no slot for type (q=" + std::to_string(q) + ", p=" + std::to_string(p) + ")");
                if (v.is_zero()) return;
                if (v.p() != dp || v.q() != dq)
                    semantic(s.line, col, std::string(what) + " needs degree (p=" + std::to_string(dp) + ", q=" + std::to_string(dq) +
                                              "), got (p=" + std::to_string(v.p()) + ", q=" + std::to_string(v.q()) + ")");
                dst[k] = v;
            };
            if (which == "D" || which == "l") {
                int k = -1;
                for (int j = 0; j < A->n(); ++j)
                    if (b->frame[u(j)] == bw[1].text) k = j;
                if (k < 0) semantic(s.line, bw[1].col, "unknown frame element '" + bw[1].text + "'");
                if (which == "D")
                    place(D, u(k), p, q, "D");
                else
                    place(l, u(k), p - 1, q, "l");
            } else if (which == "r") {
                int k = -1;
                for (int j = 0; j < A->m(); ++j)
                    if ("d" + A->chart()->vars[u(j)].name() == bw[1].text) k = j;
                if (k < 0) semantic(s.line, bw[1].col, "expected a coordinate differential, got '" + bw[1].text + "'");
                place(r, u(k), p, q - 1, "r");
            } else {
                syntax(s.line, s.col, "expected 'D', 'l' or 'r'");
            }
        }
        P.ims[name] = IMTensor::make(A, q, p, D, l, r);
    }

    void task(const Stmt& st, const std::vector<Word>& w) {
        Task t;
        t.line = st.line;
        need(st, w, 1, "a task command");
        t.command = w[1].text;
        std::size_t end = w.size();
        for (std::size_t i = 2; i < w.size(); ++i) {
            if (w[i].text == "as") {
                t.name = name_at(st, w, i + 1);
                if (i + 2 != w.size()) syntax(st.line, w[i + 2].col, "unexpected text after the task name");
                end = std::min(end, i);
                break;
            }
            if (w[i].text == "expect") {
                need(st, w, i + 1, "'fail'");
                if (w[i + 1].text != "fail") syntax(st.line, w[i + 1].col, "expected 'fail'");
                t.expect_fail = true;
                end = std::min(end, i);
                ++i;
                continue;
            }
            if (end == w.size()) t.args.push_back(w[i].text);
        }
        if (t.name.empty()) {
            t.name = t.command;
            for (const auto& a : t.args) t.name += " " + a;
        }
        for (const auto& other : P.tasks)
            if (other.name == t.name) semantic(st.line, st.col, "task '" + t.name + "' is declared twice; name one with 'as'");
        P.tasks.push_back(std::move(t));
    }
};

}  // namespace

const AlgebroidPtr& Problem::algebroid(const std::string& name, int line) const {
    auto it = algebroids.find(name);
    if (it == algebroids.end()) semantic(line, 1, "unknown algebroid '" + name + "'");
    return it->second;
}

const MixedTensor& Problem::tensor(const std::string& name, int line) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) semantic(line, 1, "unknown tensor '" + name + "'");
    return it->second;
}

const IMTensor& Problem::im(const std::string& name, int line) const {
    auto it = ims.find(name);
    if (it == ims.end()) semantic(line, 1, "unknown im tensor '" + name + "'");
    return it->second;
}

MixedTensor eval_tensor(std::string_view text, const BundlePtr& bundle, int line, int column) {
    Expr e = syntax_of(text, line, column);
    TensorEval ev{bundle, line, column};
    Val v = ev(e);
    if (v.t) return *v.t;
    return v.s.is_zero() ? MixedTensor(bundle, 0, 0) : MixedTensor::scalar(bundle, v.s);
}

Problem parse_problem(std::string_view text) {
    Parser p;
    for (const Stmt& st : split_statements(text)) p.statement(st);
    return std::move(p.P);
}

}  // namespace wb
