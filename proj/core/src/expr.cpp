#include "subrig/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "subrig/errors.hpp"

namespace subrig {

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
    {"atan", Function::Atan},
}};

NodePtr make_constant(double v)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::Constant;
    n->value = v;
    n->constant = true;
    return n;
}

NodePtr make_variable(std::size_t index)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::Variable;
    n->variable = index;
    n->constant = false;
    return n;
}

NodePtr make_unary(Op op, NodePtr a, Function f = Function::Sin)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->function = f;
    n->constant = a->constant;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->constant = a->constant && b->constant;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

// Negative literals are stored as Negate(literal) so that built trees
// unparse and reparse to the same shape as parsed ones.
NodePtr make_literal(double v)
{
    if (!std::isfinite(v)) {
        throw Error("expression constants must be finite");
    }
    if (std::signbit(v) && v != 0.0) {
        return make_unary(Op::Negate, make_constant(-v));
    }
    return make_constant(v == 0.0 ? 0.0 : v);
}

bool equal_nodes(const Expression::Node& a, const Expression::Node& b)
{
    if (a.op != b.op) {
        return false;
    }
    switch (a.op) {
    case Op::Constant:
        return a.value == b.value;
    case Op::Variable:
        return a.variable == b.variable;
    case Op::Call:
        return a.function == b.function && equal_nodes(*a.lhs, *b.lhs);
    case Op::Negate:
        return equal_nodes(*a.lhs, *b.lhs);
    default:
        return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    }
}

std::string format_literal(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

void unparse(const Expression::Node& n, const Coordinates& coords, std::string& out)
{
    switch (n.op) {
    case Op::Constant:
        out += format_literal(n.value);
        return;
    case Op::Variable:
        out += coords[n.variable];
        return;
    case Op::Negate:
        out += "(-";
        unparse(*n.lhs, coords, out);
        out += ')';
        return;
    case Op::Call:
        out += function_name(n.function);
        out += '(';
        unparse(*n.lhs, coords, out);
        out += ')';
        return;
    default:
        break;
    }
    char sym = '+';
    switch (n.op) {
    case Op::Subtract: sym = '-'; break;
    case Op::Multiply: sym = '*'; break;
    case Op::Divide: sym = '/'; break;
    case Op::Power: sym = '^'; break;
    default: break;
    }
    out += '(';
    unparse(*n.lhs, coords, out);
    out += ' ';
    out += sym;
    out += ' ';
    unparse(*n.rhs, coords, out);
    out += ')';
}

NodePtr remap(const NodePtr& n, const std::vector<std::size_t>& map)
{
    switch (n->op) {
    case Op::Constant:
        return n;
    case Op::Variable:
        return make_variable(map[n->variable]);
    case Op::Negate:
    case Op::Call:
        return make_unary(n->op, remap(n->lhs, map), n->function);
    default:
        return make_binary(n->op, remap(n->lhs, map), remap(n->rhs, map));
    }
}

class Parser {
public:
    Parser(std::string_view src, const Coordinates& coords) : src_(src), coords_(coords) {}

    NodePtr run()
    {
        skip_space();
        if (pos_ == src_.size()) {
            throw SyntaxError("empty expression", pos_);
        }
        NodePtr e = expression();
        skip_space();
        if (pos_ != src_.size()) {
            throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_space()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Op::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(Op::Subtract, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term()
    {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Op::Multiply, lhs, unary());
            } else if (accept('/')) {
                lhs = make_binary(Op::Divide, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            return make_unary(Op::Negate, unary());
        }
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) {
            return make_binary(Op::Power, base, exponent());
        }
        return base;
    }

    NodePtr exponent()
    {
        if (accept('-')) {
            return make_unary(Op::Negate, exponent());
        }
        return power();
    }

    NodePtr primary()
    {
        skip_space();
        if (pos_ == src_.size()) {
            throw SyntaxError("unexpected end of input", pos_);
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!accept(')')) {
                throw SyntaxError("expected ')'", pos_);
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t count = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0) {
            throw SyntaxError("malformed number", start);
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                throw SyntaxError("malformed exponent", mark);
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(value)) {
            throw SyntaxError("malformed number", start);
        }
        return make_constant(value);
    }

    NodePtr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        const std::size_t after = pos_;
        if (accept('(')) {
            auto it = std::find_if(kFunctions.begin(), kFunctions.end(),
                                   [&](const auto& f) { return f.first == name; });
            if (it == kFunctions.end()) {
                throw UnknownFunction(name);
            }
            NodePtr arg = expression();
            if (!accept(')')) {
                throw SyntaxError("expected ')'", pos_);
            }
            return make_unary(Op::Call, arg, it->second);
        }
        pos_ = after;
        auto it = std::find(coords_.begin(), coords_.end(), name);
        if (it == coords_.end()) {
            throw UnknownVariable(name);
        }
        return make_variable(static_cast<std::size_t>(it - coords_.begin()));
    }

    std::string_view src_;
    const Coordinates& coords_;
    std::size_t pos_ = 0;
};

std::shared_ptr<const Coordinates> merged(const std::shared_ptr<const Coordinates>& a,
                                          const std::shared_ptr<const Coordinates>& b)
{
    if (a == b || *a == *b) {
        return a;
    }
    // A constant over an empty list may combine with anything.
    if (a->empty()) {
        return b;
    }
    if (b->empty()) {
        return a;
    }
    throw Error("cannot combine expressions over different coordinate lists");
}

} // namespace

std::string_view function_name(Function f) noexcept
{
    for (const auto& [name, fn] : kFunctions) {
        if (fn == f) {
            return name;
        }
    }
    return "?";
}

Expression::Expression() : Expression(make_constant(0.0), std::make_shared<const Coordinates>()) {}

Expression::Expression(std::shared_ptr<const Node> node, std::shared_ptr<const Coordinates> coords)
    : node_(std::move(node)), coords_(std::move(coords))
{
}

Expression Expression::constant(double value, const Coordinates& coords)
{
    return Expression(make_literal(value), std::make_shared<const Coordinates>(coords));
}

Expression Expression::variable(std::size_t index, const Coordinates& coords)
{
    if (index >= coords.size()) {
        throw UnknownVariable("#" + std::to_string(index));
    }
    return Expression(make_variable(index), std::make_shared<const Coordinates>(coords));
}

Expression Expression::variable(std::string_view name, const Coordinates& coords)
{
    auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end()) {
        throw UnknownVariable(std::string(name));
    }
    return variable(static_cast<std::size_t>(it - coords.begin()), coords);
}

Op Expression::op() const noexcept { return node_->op; }
double Expression::constant_value() const noexcept { return node_->value; }
std::size_t Expression::variable_index() const noexcept { return node_->variable; }
Function Expression::function() const noexcept { return node_->function; }
bool Expression::is_constant() const noexcept { return node_->constant; }

std::size_t Expression::operand_count() const noexcept
{
    return node_->rhs ? 2 : (node_->lhs ? 1 : 0);
}

Expression Expression::operand(std::size_t i) const
{
    const auto& child = i == 0 ? node_->lhs : node_->rhs;
    if (!child) {
        throw Error("expression operand index out of range");
    }
    return Expression(child, coords_);
}

Expression Expression::rebind(const Coordinates& coords) const
{
    std::vector<std::size_t> map(coords_->size());
    for (std::size_t i = 0; i < coords_->size(); ++i) {
        auto it = std::find(coords.begin(), coords.end(), (*coords_)[i]);
        if (it == coords.end()) {
            // Only an error if the variable is actually referenced.
            map[i] = coords.size();
            continue;
        }
        map[i] = static_cast<std::size_t>(it - coords.begin());
    }
    auto check = [&](auto&& self, const Node& n) -> void {
        if (n.op == Op::Variable && map[n.variable] == coords.size()) {
            throw UnknownVariable((*coords_)[n.variable]);
        }
        if (n.lhs) self(self, *n.lhs);
        if (n.rhs) self(self, *n.rhs);
    };
    check(check, *node_);
    return Expression(remap(node_, map), std::make_shared<const Coordinates>(coords));
}

std::string Expression::to_string() const
{
    std::string out;
    unparse(*node_, *coords_, out);
    return out;
}

bool operator==(const Expression& a, const Expression& b)
{
    return *a.coords_ == *b.coords_ && equal_nodes(*a.node_, *b.node_);
}

Expression operator-(const Expression& a)
{
    return Expression(make_unary(Op::Negate, a.node_), a.coords_);
}

Expression operator+(const Expression& a, const Expression& b)
{
    return Expression(make_binary(Op::Add, a.node_, b.node_), merged(a.coords_, b.coords_));
}

Expression operator-(const Expression& a, const Expression& b)
{
    return Expression(make_binary(Op::Subtract, a.node_, b.node_), merged(a.coords_, b.coords_));
}

Expression operator*(const Expression& a, const Expression& b)
{
    return Expression(make_binary(Op::Multiply, a.node_, b.node_), merged(a.coords_, b.coords_));
}

Expression operator/(const Expression& a, const Expression& b)
{
    return Expression(make_binary(Op::Divide, a.node_, b.node_), merged(a.coords_, b.coords_));
}

Expression operator*(double a, const Expression& b)
{
    return Expression(make_binary(Op::Multiply, make_literal(a), b.node_), b.coords_);
}

Expression operator+(const Expression& a, double b)
{
    return Expression(make_binary(Op::Add, a.node_, make_literal(b)), a.coords_);
}

Expression pow(const Expression& base, const Expression& exponent)
{
    return Expression(make_binary(Op::Power, base.node_, exponent.node_),
                      merged(base.coords_, exponent.coords_));
}

Expression pow(const Expression& base, double exponent)
{
    return Expression(make_binary(Op::Power, base.node_, make_literal(exponent)), base.coords_);
}

Expression call(Function f, const Expression& argument)
{
    return Expression(make_unary(Op::Call, argument.node_, f), argument.coords_);
}

Expression parse(std::string_view source, const Coordinates& coords)
{
    Parser parser(source, coords);
    return Expression(parser.run(), std::make_shared<const Coordinates>(coords));
}

} // namespace subrig
