#include "warpcheck/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace warpcheck {
namespace {

using ast::Func;
using ast::Kind;
using ast::Node;
using ast::NodePtr;

// ============================================================================
// Printing
// ============================================================================

const char* func_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool kind_in(Kind k, std::initializer_list<Kind> set) {
    for (Kind s : set)
        if (k == s) return true;
    return false;
}

void print_node(const Node& n, std::string& out);

void print_wrapped(const Node& n, std::string& out, bool parens) {
    if (parens) {
        out += '(';
        print_node(n, out);
        out += ')';
    } else {
        print_node(n, out);
    }
}

// Parenthesization is chosen so that reparsing the printed form recovers the
// exact tree: '+'/'-' and '*'/'/' associate left, '^' takes a literal rational
// exponent, and unary minus binds tighter than '^' (so "-x^2" means (-x)^2).
void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
    case Kind::Constant:
        out += format_double(n.constant);
        return;
    case Kind::Coordinate:
    case Kind::Symbol:
        out += n.name;
        return;
    case Kind::Call:
        out += func_name(n.func);
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
        return;
    case Kind::Neg:
        out += '-';
        print_wrapped(*n.lhs, out,
                      kind_in(n.lhs->kind, {Kind::Add, Kind::Sub, Kind::Mul, Kind::Div, Kind::Pow}));
        return;
    case Kind::Add:
        print_node(*n.lhs, out);
        out += '+';
        print_wrapped(*n.rhs, out, kind_in(n.rhs->kind, {Kind::Add, Kind::Sub}));
        return;
    case Kind::Sub:
        print_node(*n.lhs, out);
        out += '-';
        print_wrapped(*n.rhs, out, kind_in(n.rhs->kind, {Kind::Add, Kind::Sub}));
        return;
    case Kind::Mul:
        print_wrapped(*n.lhs, out, kind_in(n.lhs->kind, {Kind::Add, Kind::Sub}));
        out += '*';
        print_wrapped(*n.rhs, out,
                      kind_in(n.rhs->kind, {Kind::Add, Kind::Sub, Kind::Mul, Kind::Div}));
        return;
    case Kind::Div:
        print_wrapped(*n.lhs, out, kind_in(n.lhs->kind, {Kind::Add, Kind::Sub}));
        out += '/';
        print_wrapped(*n.rhs, out,
                      kind_in(n.rhs->kind, {Kind::Add, Kind::Sub, Kind::Mul, Kind::Div}));
        return;
    case Kind::Pow:
        print_wrapped(*n.lhs, out,
                      kind_in(n.lhs->kind, {Kind::Add, Kind::Sub, Kind::Mul, Kind::Div, Kind::Pow}));
        out += '^';
        out += std::to_string(n.exponent.num);
        if (n.exponent.den != 1) {
            out += '/';
            out += std::to_string(n.exponent.den);
        }
        return;
    }
}

std::string printed(const Node& n) {
    std::string out;
    print_node(n, out);
    return out;
}

// ============================================================================
// Lexer
// ============================================================================

enum class Tok : std::uint8_t {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End
};

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;  // identifier name or raw number text
    double number = 0.0;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> toks;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            const std::size_t start = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < n && src[i] == '.') {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    ++j;
                    while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                    i = j;
                }
            }
            const std::string text = src.substr(start, i - start);
            toks.push_back({Tok::Number, start, text, std::strtod(text.c_str(), nullptr)});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            toks.push_back({Tok::Ident, start, src.substr(start, i - start)});
            continue;
        }
        Tok k;
        switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        toks.push_back({k, i, std::string(1, c)});
        ++i;
    }
    toks.push_back({Tok::End, n, ""});
    return toks;
}

// ============================================================================
// Parser
// ============================================================================

const std::map<std::string, Func>& function_table() {
    static const std::map<std::string, Func> table = {
        {"sin", Func::Sin},   {"cos", Func::Cos}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
        {"tanh", Func::Tanh}, {"exp", Func::Exp}, {"log", Func::Log},   {"sqrt", Func::Sqrt},
    };
    return table;
}

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr make_constant(double v) {
    Node n;
    n.kind = Kind::Constant;
    n.constant = v;
    return make_node(std::move(n));
}

NodePtr make_binary(Kind k, NodePtr lhs, NodePtr rhs) {
    Node n;
    n.kind = k;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    return make_node(std::move(n));
}

// Negation of a literal folds into the literal so that printed negative
// constants round-trip to the same tree.
NodePtr make_neg(NodePtr child) {
    if (child->kind == Kind::Constant) return make_constant(-child->constant);
    Node n;
    n.kind = Kind::Neg;
    n.lhs = std::move(child);
    return make_node(std::move(n));
}

class Parser {
  public:
    Parser(const std::string& src, const std::vector<std::string>& coords)
        : toks_(lex(src)) {
        for (std::size_t i = 0; i < coords.size(); ++i)
            coord_index_.emplace(coords[i], i);
    }

    NodePtr parse_all() {
        NodePtr e = parse_expr();
        if (peek().kind != Tok::End)
            throw ParseError("unexpected input after expression", peek().offset);
        return e;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }

    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(Tok k, const char* what) {
        if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().offset);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept(Tok::Plus))
                lhs = make_binary(Kind::Add, lhs, parse_term());
            else if (accept(Tok::Minus))
                lhs = make_binary(Kind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (accept(Tok::Star))
                lhs = make_binary(Kind::Mul, lhs, parse_factor());
            else if (accept(Tok::Slash))
                lhs = make_binary(Kind::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        NodePtr base = parse_base();
        if (accept(Tok::Caret)) {
            Node n;
            n.kind = Kind::Pow;
            n.lhs = std::move(base);
            n.exponent = parse_signed_rational();
            return make_node(std::move(n));
        }
        return base;
    }

    NodePtr parse_base() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number:
            advance();
            return make_constant(t.number);
        case Tok::Minus:
            advance();
            return make_neg(parse_base());
        case Tok::LParen: {
            advance();
            NodePtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::Ident: {
            advance();
            if (peek().kind == Tok::LParen) {
                auto it = function_table().find(t.text);
                if (it == function_table().end())
                    throw ParseError("unknown function '" + t.text + "'", t.offset);
                advance();
                NodePtr arg = parse_expr();
                expect(Tok::RParen, "')'");
                Node n;
                n.kind = Kind::Call;
                n.func = it->second;
                n.lhs = std::move(arg);
                return make_node(std::move(n));
            }
            if (auto it = coord_index_.find(t.text); it != coord_index_.end()) {
                Node n;
                n.kind = Kind::Coordinate;
                n.coord_index = it->second;
                n.name = t.text;
                return make_node(std::move(n));
            }
            if (function_table().count(t.text))
                throw ParseError("function '" + t.text + "' requires an argument list",
                                 t.offset);
            Node n;
            n.kind = Kind::Symbol;
            n.name = t.text;
            return make_node(std::move(n));
        }
        default:
            throw ParseError("expected an expression", t.offset);
        }
    }

    Rational parse_signed_rational() {
        bool negative = accept(Tok::Minus);
        Rational r;
        r.num = parse_integer("exponent numerator");
        if (negative) r.num = -r.num;
        r.den = 1;
        if (accept(Tok::Slash)) {
            r.den = parse_integer("exponent denominator");
            if (r.den == 0) throw ParseError("zero denominator in exponent", peek().offset);
        }
        const long long g = std::gcd(r.num < 0 ? -r.num : r.num, r.den);
        if (g > 1) {
            r.num /= g;
            r.den /= g;
        }
        return r;
    }

    long long parse_integer(const char* what) {
        const Token& t = peek();
        if (t.kind != Tok::Number)
            throw ParseError(std::string("expected ") + what, t.offset);
        for (char c : t.text)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError(std::string(what) + " must be an integer", t.offset);
        advance();
        try {
            return std::stoll(t.text);
        } catch (const std::exception&) {
            throw ParseError(std::string(what) + " out of range", t.offset);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> coord_index_;
};

// ============================================================================
// Evaluation
// ============================================================================

template <typename T>
struct EvalTraits;

template <>
struct EvalTraits<double> {
    static constexpr bool derivatives = false;
    static double constant(double v, std::size_t) { return v; }
    static double coordinate(std::span<const double> p, std::size_t i, std::size_t) {
        return p[i];
    }
    static double value(double x) { return x; }
};

template <>
struct EvalTraits<Jet2> {
    static constexpr bool derivatives = true;
    static Jet2 constant(double v, std::size_t n) { return Jet2::constant(v, n); }
    static Jet2 coordinate(std::span<const double> p, std::size_t i, std::size_t n) {
        return Jet2::variable(p[i], n, i);
    }
    static double value(const Jet2& x) { return x.value(); }
};

double pow_scalar(double x, double e) { return std::pow(x, e); }
Jet2 pow_scalar(const Jet2& x, double e) { return pow(x, e); }

template <typename T>
T apply_function(Func f, const T& a) {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tanh;
    switch (f) {
    case Func::Sin: return sin(a);
    case Func::Cos: return cos(a);
    case Func::Sinh: return sinh(a);
    case Func::Cosh: return cosh(a);
    case Func::Tanh: return tanh(a);
    case Func::Exp: return exp(a);
    case Func::Log: return log(a);
    case Func::Sqrt: return sqrt(a);
    }
    return a;
}

template <typename T>
T eval_node(const Node& n, std::span<const double> point) {
    using Tr = EvalTraits<T>;
    const std::size_t nv = point.size();
    switch (n.kind) {
    case Kind::Constant:
        return Tr::constant(n.constant, nv);
    case Kind::Coordinate:
        return Tr::coordinate(point, n.coord_index, nv);
    case Kind::Symbol:
        throw EvalError("unbound symbol '" + n.name + "'", printed(n));
    case Kind::Add:
        return eval_node<T>(*n.lhs, point) + eval_node<T>(*n.rhs, point);
    case Kind::Sub:
        return eval_node<T>(*n.lhs, point) - eval_node<T>(*n.rhs, point);
    case Kind::Mul:
        return eval_node<T>(*n.lhs, point) * eval_node<T>(*n.rhs, point);
    case Kind::Div: {
        T a = eval_node<T>(*n.lhs, point);
        T b = eval_node<T>(*n.rhs, point);
        if (Tr::value(b) == 0.0) throw EvalError("division by zero", printed(n));
        return a / b;
    }
    case Kind::Neg:
        return -eval_node<T>(*n.lhs, point);
    case Kind::Pow: {
        T b = eval_node<T>(*n.lhs, point);
        const double bv = Tr::value(b);
        const Rational& e = n.exponent;
        if (e.is_integer()) {
            if (e.num < 0 && bv == 0.0)
                throw EvalError("zero raised to a negative power", printed(n));
        } else if (bv <= 0.0) {
            throw EvalError("fractional power of a nonpositive base", printed(n));
        }
        return pow_scalar(b, e.to_double());
    }
    case Kind::Call: {
        T a = eval_node<T>(*n.lhs, point);
        const double v = Tr::value(a);
        if (n.func == Func::Log && v <= 0.0)
            throw EvalError("logarithm of a nonpositive value", printed(n));
        if (n.func == Func::Sqrt) {
            if (v < 0.0) throw EvalError("square root of a negative value", printed(n));
            if (Tr::derivatives && v == 0.0)
                throw EvalError("square root derivative undefined at zero", printed(n));
        }
        return apply_function(n.func, a);
    }
    }
    throw EvalError("malformed expression tree", "?");
}

// ============================================================================
// Tree rewriting
// ============================================================================

NodePtr bind_node(const NodePtr& n, const std::map<std::string, double>& constants,
                  bool& changed) {
    switch (n->kind) {
    case Kind::Constant:
    case Kind::Coordinate:
        return n;
    case Kind::Symbol: {
        auto it = constants.find(n->name);
        if (it == constants.end()) return n;
        changed = true;
        return make_constant(it->second);
    }
    default: {
        bool child_changed = false;
        NodePtr lhs = n->lhs ? bind_node(n->lhs, constants, child_changed) : nullptr;
        NodePtr rhs = n->rhs ? bind_node(n->rhs, constants, child_changed) : nullptr;
        if (!child_changed) return n;
        changed = true;
        if (n->kind == Kind::Neg) return make_neg(std::move(lhs));
        Node copy = *n;
        copy.lhs = std::move(lhs);
        copy.rhs = std::move(rhs);
        return make_node(std::move(copy));
    }
    }
}

void collect_symbols(const Node& n, std::set<std::string>& out) {
    if (n.kind == Kind::Symbol) out.insert(n.name);
    if (n.lhs) collect_symbols(*n.lhs, out);
    if (n.rhs) collect_symbols(*n.rhs, out);
}

NodePtr remap_node(const NodePtr& n, const std::vector<std::string>& new_coords,
                   std::size_t offset) {
    if (n->kind == Kind::Coordinate) {
        const std::size_t idx = n->coord_index + offset;
        if (idx >= new_coords.size() || new_coords[idx] != n->name)
            throw GeometryError("coordinate remap mismatch for '" + n->name + "'");
        Node copy = *n;
        copy.coord_index = idx;
        return make_node(std::move(copy));
    }
    if (!n->lhs && !n->rhs) return n;
    Node copy = *n;
    if (n->lhs) copy.lhs = remap_node(n->lhs, new_coords, offset);
    if (n->rhs) copy.rhs = remap_node(n->rhs, new_coords, offset);
    return make_node(std::move(copy));
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Kind::Constant:
        return a.constant == b.constant;
    case Kind::Coordinate:
        return a.coord_index == b.coord_index && a.name == b.name;
    case Kind::Symbol:
        return a.name == b.name;
    case Kind::Call:
        if (a.func != b.func) return false;
        break;
    case Kind::Pow:
        if (a.exponent.num != b.exponent.num || a.exponent.den != b.exponent.den) return false;
        break;
    default:
        break;
    }
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    if (a.lhs && !nodes_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !nodes_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

} // namespace

// ============================================================================
// Expression
// ============================================================================

Expression::Expression(ast::NodePtr root, std::vector<std::string> coords)
    : root_(std::move(root)), coords_(std::move(coords)) {}

double Expression::value(std::span<const double> point) const {
    if (point.size() != coords_.size())
        throw std::invalid_argument("point dimension does not match coordinate count");
    return eval_node<double>(*root_, point);
}

Jet2 Expression::jet2(std::span<const double> point) const {
    if (point.size() != coords_.size())
        throw std::invalid_argument("point dimension does not match coordinate count");
    return eval_node<Jet2>(*root_, point);
}

Expression Expression::bind(const std::map<std::string, double>& constants) const {
    bool changed = false;
    return Expression(bind_node(root_, constants, changed), coords_);
}

std::vector<std::string> Expression::unbound_symbols() const {
    std::set<std::string> names;
    collect_symbols(*root_, names);
    return std::vector<std::string>(names.begin(), names.end());
}

std::string Expression::str() const { return printed(*root_); }

Expression Expression::remap_coords(std::vector<std::string> new_coords,
                                    std::size_t offset) const {
    ast::NodePtr root = remap_node(root_, new_coords, offset);
    return Expression(std::move(root), std::move(new_coords));
}

Expression parse(const std::string& source, const std::vector<std::string>& coords) {
    Parser p(source, coords);
    return Expression(p.parse_all(), coords);
}

bool structurally_equal(const Expression& a, const Expression& b) {
    return a.coords() == b.coords() && nodes_equal(*a.root(), *b.root());
}

Expression constant_expression(double v, const std::vector<std::string>& coords) {
    return Expression(make_constant(v), coords);
}

Expression multiply(const Expression& a, const Expression& b) {
    if (a.coords() != b.coords())
        throw std::invalid_argument("multiply requires matching coordinate lists");
    return Expression(make_binary(Kind::Mul, a.root(), b.root()), a.coords());
}

} // namespace warpcheck
