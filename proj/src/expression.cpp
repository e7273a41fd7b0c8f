#include "eif/expression.hpp"

#include <cctype>
#include <cmath>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

struct Expression::Node {
    enum class Kind { number, coord, neg, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    std::size_t index = 0;
    std::string name;
    std::vector<std::shared_ptr<const Node>> args;
};

double expit(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double clamp10(double z) { return z < -10.0 ? -10.0 : (z > 10.0 ? 10.0 : z); }

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse_all() {
        auto n = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

    std::size_t arity = 0;

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorKind::config, "expression '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (accept('+')) lhs = make(Kind::add, {lhs, term()});
            else if (accept('-')) lhs = make(Kind::sub, {lhs, term()});
            else return lhs;
        }
    }
    NodePtr term() {
        auto lhs = unary();
        while (true) {
            if (accept('*')) lhs = make(Kind::mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Kind::div, {lhs, unary()});
            else return lhs;
        }
    }
    NodePtr unary() {
        if (accept('-')) return make(Kind::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }
    NodePtr power() {
        auto base = primary();
        if (accept('^')) return make(Kind::pow, {base, unary()});
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end");
        const char c = s_[pos_];
        if (accept('(')) {
            auto n = expr();
            if (!accept(')')) error("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = pos_;
            while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                                       s_[end] == 'e' || s_[end] == 'E' ||
                                       ((s_[end] == '-' || s_[end] == '+') && end > pos_ &&
                                        (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
                ++end;
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::number;
            n->value = parse_number(s_.substr(pos_, end - pos_), "expression literal");
            pos_ = end;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
            std::string name(s_.substr(pos_, end - pos_));
            pos_ = end;
            if (name.size() > 1 && name[0] == 'x' &&
                name.find_first_not_of("0123456789", 1) == std::string::npos) {
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::coord;
                n->index = std::stoul(name.substr(1));
                arity = std::max(arity, n->index + 1);
                return n;
            }
            if (!accept('(')) error("unknown identifier '" + name + "'");
            std::vector<NodePtr> args{expr()};
            while (accept(',')) args.push_back(expr());
            if (!accept(')')) error("expected ')' after arguments of " + name);
            const std::size_t want = name == "pow" ? 2 : 1;
            if (name != "exp" && name != "log" && name != "sqrt" && name != "abs" && name != "pow" &&
                name != "expit" && name != "c10")
                error("unknown function '" + name + "'");
            if (args.size() != want) error(name + " takes " + std::to_string(want) + " argument(s)");
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::call;
            n->name = name;
            n->args = std::move(args);
            return n;
        }
        error("unexpected '" + std::string(1, c) + "'");
    }
};

double eval(const Expression::Node& n, std::span<const double> u) {
    switch (n.kind) {
        case Kind::number: return n.value;
        case Kind::coord:
            if (n.index >= u.size())
                fail(ErrorKind::input, "expression references x" + std::to_string(n.index) + " beyond the point dimension");
            return u[n.index];
        case Kind::neg: return -eval(*n.args[0], u);
        case Kind::add: return eval(*n.args[0], u) + eval(*n.args[1], u);
        case Kind::sub: return eval(*n.args[0], u) - eval(*n.args[1], u);
        case Kind::mul: return eval(*n.args[0], u) * eval(*n.args[1], u);
        case Kind::div: return eval(*n.args[0], u) / eval(*n.args[1], u);
        case Kind::pow: return std::pow(eval(*n.args[0], u), eval(*n.args[1], u));
        case Kind::call: {
            const double a = eval(*n.args[0], u);
            if (n.name == "exp") return std::exp(a);
            if (n.name == "log") return std::log(a);
            if (n.name == "sqrt") return std::sqrt(a);
            if (n.name == "abs") return std::abs(a);
            if (n.name == "pow") return std::pow(a, eval(*n.args[1], u));
            if (n.name == "expit") return expit(a);
            return clamp10(a);
        }
    }
    return 0.0;
}

void collect_kinks(const Expression::Node& n, std::vector<std::pair<std::size_t, double>>& out) {
    if (n.kind == Kind::call && n.args.size() == 1 && n.args[0]->kind == Kind::coord) {
        if (n.name == "c10") {
            out.emplace_back(n.args[0]->index, -10.0);
            out.emplace_back(n.args[0]->index, 10.0);
        } else if (n.name == "abs") {
            out.emplace_back(n.args[0]->index, 0.0);
        }
    }
    for (const auto& a : n.args) collect_kinks(*a, out);
}

}  // namespace

Expression::Expression() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    root_ = n;
    text_ = "0";
}

Expression Expression::parse(std::string_view text) {
    Parser p(text);
    Expression e;
    e.root_ = p.parse_all();
    e.text_ = trim(text);
    e.arity_ = p.arity;
    return e;
}

Expression Expression::constant(double v) {
    return parse(format_number(v));
}

double Expression::operator()(std::span<const double> u) const { return eval(*root_, u); }

std::vector<std::pair<std::size_t, double>> Expression::kinks() const {
    std::vector<std::pair<std::size_t, double>> out;
    collect_kinks(*root_, out);
    return out;
}

}  // namespace eif
