#include "isocert/expr.hpp"

#include "isocert/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace isocert {

struct Expr::Node {
    enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };
    enum class Fn { abs, log, exp, sqrt, pow };

    Kind kind = Kind::number;
    double number = 0.0;
    Fn fn = Fn::abs;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse_all() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = sum();
        skip();
        if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
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

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (accept('+'))
                lhs = make(Node::Kind::add, {lhs, product()});
            else if (accept('-'))
                lhs = make(Node::Kind::sub, {lhs, product()});
            else
                return lhs;
        }
    }

    NodePtr product() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(Node::Kind::mul, {lhs, unary()});
            else if (accept('/'))
                lhs = make(Node::Kind::div, {lhs, unary()});
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::negate, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Node::Kind::pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        std::string buf(s_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        const std::size_t used = static_cast<std::size_t>(end - buf.c_str());
        if (used == 0) throw ParseError("malformed number", start);
        pos_ += used;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::number;
        n->number = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name == "x") return make(Node::Kind::variable, {});

        Node::Fn fn;
        std::size_t arity = 1;
        if (name == "abs")
            fn = Node::Fn::abs;
        else if (name == "log")
            fn = Node::Fn::log;
        else if (name == "exp")
            fn = Node::Fn::exp;
        else if (name == "sqrt")
            fn = Node::Fn::sqrt;
        else if (name == "pow") {
            fn = Node::Fn::pow;
            arity = 2;
        } else {
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        }

        expect('(');
        std::vector<NodePtr> args{sum()};
        while (args.size() < arity) {
            expect(',');
            args.push_back(sum());
        }
        expect(')');
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = fn;
        n->args = std::move(args);
        return n;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (std::isnan(v)) throw DomainError(std::string(what) + " outside its domain");
    return v;
}

double real_pow(double a, double b) {
    if (a < 0.0 && b != std::floor(b)) throw DomainError("negative base with non-integer exponent");
    if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
    return std::pow(a, b);
}

double evaluate(const Node& n, double x) {
    switch (n.kind) {
    case Node::Kind::number: return n.number;
    case Node::Kind::variable: return x;
    case Node::Kind::negate: return -evaluate(*n.args[0], x);
    case Node::Kind::add: return checked(evaluate(*n.args[0], x) + evaluate(*n.args[1], x), "sum");
    case Node::Kind::sub: return checked(evaluate(*n.args[0], x) - evaluate(*n.args[1], x), "difference");
    case Node::Kind::mul: return checked(evaluate(*n.args[0], x) * evaluate(*n.args[1], x), "product");
    case Node::Kind::div: {
        const double d = evaluate(*n.args[1], x);
        if (d == 0.0) throw DomainError("division by zero");
        return checked(evaluate(*n.args[0], x) / d, "quotient");
    }
    case Node::Kind::pow: return real_pow(evaluate(*n.args[0], x), evaluate(*n.args[1], x));
    case Node::Kind::call: {
        const double a = evaluate(*n.args[0], x);
        switch (n.fn) {
        case Node::Fn::abs: return std::abs(a);
        case Node::Fn::log:
            if (!(a > 0.0)) throw DomainError("log of a nonpositive number");
            return std::log(a);
        case Node::Fn::exp: return std::exp(a);
        case Node::Fn::sqrt:
            if (a < 0.0) throw DomainError("sqrt of a negative number");
            return std::sqrt(a);
        case Node::Fn::pow: return real_pow(a, evaluate(*n.args[1], x));
        }
    }
    }
    throw DomainError("corrupt expression");
}

void print_node(const Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print_node(*n.args[0], out);
        out += op;
        print_node(*n.args[1], out);
        out += ')';
    };
    switch (n.kind) {
    case Node::Kind::number: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        out += buf;
        return;
    }
    case Node::Kind::variable: out += 'x'; return;
    case Node::Kind::negate:
        out += "(-";
        print_node(*n.args[0], out);
        out += ')';
        return;
    case Node::Kind::add: binary(" + "); return;
    case Node::Kind::sub: binary(" - "); return;
    case Node::Kind::mul: binary(" * "); return;
    case Node::Kind::div: binary(" / "); return;
    case Node::Kind::pow: binary(" ^ "); return;
    case Node::Kind::call: {
        static const char* names[] = {"abs", "log", "exp", "sqrt", "pow"};
        out += names[static_cast<int>(n.fn)];
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            print_node(*n.args[i], out);
        }
        out += ')';
        return;
    }
    }
}

bool same(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    if (a.kind == Node::Kind::number && a.number != b.number) return false;
    if (a.kind == Node::Kind::call && a.fn != b.fn) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same(*a.args[i], *b.args[i])) return false;
    return true;
}

} // namespace

Expr Expr::parse(std::string_view text) {
    Expr e;
    e.root_ = Parser(text).parse_all();
    return e;
}

double Expr::eval(double x) const {
    if (!root_) throw ArgumentError("evaluating an empty expression");
    return evaluate(*root_, x);
}

std::string Expr::print() const {
    std::string out;
    if (root_) print_node(*root_, out);
    return out;
}

bool Expr::operator==(const Expr& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return same(*root_, *other.root_);
}

} // namespace isocert
