#include "worldsim/expr.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace worldsim {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Comma, End };
    Kind kind;
    std::string text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::Kind::End, "", 0.0};
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
            if (ec != std::errc{}) throw ParseError("bad number in expression: '" + src_ + "'");
            tok_ = {Token::Kind::Number, std::string(src_.data() + pos_, ptr), v};
            pos_ = static_cast<size_t>(ptr - src_.data());
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                    src_[pos_] == '.')) {
                ++pos_;
            }
            tok_ = {Token::Kind::Ident, src_.substr(start, pos_ - start), 0.0};
            return;
        }
        switch (c) {
            case '(': tok_ = {Token::Kind::LParen, "(", 0.0}; ++pos_; return;
            case ')': tok_ = {Token::Kind::RParen, ")", 0.0}; ++pos_; return;
            case ',': tok_ = {Token::Kind::Comma, ",", 0.0}; ++pos_; return;
            case '+': case '-': case '*': case '/': case '^':
                tok_ = {Token::Kind::Op, std::string(1, c), 0.0};
                ++pos_;
                return;
            case '<': case '>': case '=': case '!': {
                std::string op(1, c);
                ++pos_;
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    op += '=';
                    ++pos_;
                }
                if (op == "=" || op == "!") throw ParseError("bad operator '" + op + "' in '" + src_ + "'");
                tok_ = {Token::Kind::Op, op, 0.0};
                return;
            }
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "' in '" + src_ + "'");
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    Token tok_;
};

const std::set<std::string> kUnaryFns = {"exp", "ln", "sqrt", "abs"};
const std::set<std::string> kBinaryFns = {"min", "max"};

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src), lex_(src) {}

    ExprNode parse() {
        ExprNode e = expression();
        if (lex_.peek().kind != Token::Kind::End) {
            throw ParseError("trailing input after expression: '" + src_ + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(what + " in expression '" + src_ + "'");
    }

    void expect(Token::Kind k, const char* what) {
        if (lex_.peek().kind != k) fail(std::string("expected ") + what);
        lex_.take();
    }

    ExprNode expression() { return additive(); }

    ExprNode comparison() {
        ExprNode lhs = additive();
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Op &&
            (t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" ||
             t.text == "==" || t.text == "!=")) {
            ExprNode node;
            node.kind = ExprNode::Kind::Compare;
            node.name = lex_.take().text;
            node.children.push_back(std::move(lhs));
            node.children.push_back(additive());
            return node;
        }
        return lhs;
    }

    ExprNode additive() {
        ExprNode lhs = term();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            ExprNode node;
            node.kind = ExprNode::Kind::Binary;
            node.name = lex_.take().text;
            node.children.push_back(std::move(lhs));
            node.children.push_back(term());
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprNode term() {
        ExprNode lhs = unary();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            ExprNode node;
            node.kind = ExprNode::Kind::Binary;
            node.name = lex_.take().text;
            node.children.push_back(std::move(lhs));
            node.children.push_back(unary());
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprNode unary() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
            lex_.take();
            ExprNode node;
            node.kind = ExprNode::Kind::Unary;
            node.name = "-";
            node.children.push_back(unary());
            return node;
        }
        return power();
    }

    ExprNode power() {
        ExprNode base = primary();
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
            lex_.take();
            ExprNode node;
            node.kind = ExprNode::Kind::Binary;
            node.name = "^";
            node.children.push_back(std::move(base));
            node.children.push_back(unary());  // right-associative
            return node;
        }
        return base;
    }

    ExprNode primary() {
        Token t = lex_.take();
        if (t.kind == Token::Kind::Number) {
            ExprNode node;
            node.kind = ExprNode::Kind::Number;
            node.number = t.number;
            return node;
        }
        if (t.kind == Token::Kind::LParen) {
            ExprNode inner = expression();
            expect(Token::Kind::RParen, "')'");
            return inner;
        }
        if (t.kind != Token::Kind::Ident) fail("expected operand, got '" + t.text + "'");

        if (lex_.peek().kind != Token::Kind::LParen) {
            ExprNode node;
            node.kind = ExprNode::Kind::Name;
            node.name = t.text;
            return node;
        }
        lex_.take();  // '('
        ExprNode node;
        node.name = t.text;
        if (t.text == "if") {
            node.kind = ExprNode::Kind::If;
            node.children.push_back(comparison());
            expect(Token::Kind::Comma, "','");
            node.children.push_back(expression());
            expect(Token::Kind::Comma, "','");
            node.children.push_back(expression());
        } else if (kBinaryFns.count(t.text)) {
            node.kind = ExprNode::Kind::Call;
            node.children.push_back(expression());
            expect(Token::Kind::Comma, "','");
            node.children.push_back(expression());
        } else {
            // unary builtin or table application
            node.kind = ExprNode::Kind::Call;
            node.children.push_back(expression());
        }
        expect(Token::Kind::RParen, "')'");
        return node;
    }

    const std::string& src_;
    Lexer lex_;
};

void collect_refs(const ExprNode& n, std::set<std::string>& values, std::set<std::string>& tables) {
    switch (n.kind) {
        case ExprNode::Kind::Name:
            values.insert(n.name);
            break;
        case ExprNode::Kind::Call:
            if (!kUnaryFns.count(n.name) && !kBinaryFns.count(n.name)) tables.insert(n.name);
            break;
        default:
            break;
    }
    for (const auto& c : n.children) collect_refs(c, values, tables);
}

class Compiler {
public:
    Compiler(const std::function<std::int32_t(const std::string&)>& value_slot,
             const std::function<std::int32_t(const std::string&)>& table_index)
        : value_slot_(value_slot), table_index_(table_index) {}

    std::vector<Instr> compile(const ExprNode& root) {
        emit(root);
        return std::move(code_);
    }

private:
    void emit(const ExprNode& n) {
        switch (n.kind) {
            case ExprNode::Kind::Number:
                code_.push_back({OpCode::PushConst, 0, n.number});
                break;
            case ExprNode::Kind::Name:
                code_.push_back({OpCode::Load, value_slot_(n.name), 0.0});
                break;
            case ExprNode::Kind::Unary:
                emit(n.children[0]);
                code_.push_back({OpCode::Neg, 0, 0.0});
                break;
            case ExprNode::Kind::Binary: {
                emit(n.children[0]);
                emit(n.children[1]);
                OpCode op = OpCode::Add;
                if (n.name == "-") op = OpCode::Sub;
                else if (n.name == "*") op = OpCode::Mul;
                else if (n.name == "/") op = OpCode::Div;
                else if (n.name == "^") op = OpCode::Pow;
                code_.push_back({op, 0, 0.0});
                break;
            }
            case ExprNode::Kind::Compare: {
                emit(n.children[0]);
                emit(n.children[1]);
                OpCode op = OpCode::Lt;
                if (n.name == "<=") op = OpCode::Le;
                else if (n.name == ">") op = OpCode::Gt;
                else if (n.name == ">=") op = OpCode::Ge;
                else if (n.name == "==") op = OpCode::EqCmp;
                else if (n.name == "!=") op = OpCode::NeCmp;
                code_.push_back({op, 0, 0.0});
                break;
            }
            case ExprNode::Kind::If: {
                emit(n.children[0]);
                const auto jz_at = code_.size();
                code_.push_back({OpCode::JumpIfZero, 0, 0.0});
                emit(n.children[1]);
                const auto jmp_at = code_.size();
                code_.push_back({OpCode::Jump, 0, 0.0});
                code_[jz_at].arg = static_cast<std::int32_t>(code_.size());
                emit(n.children[2]);
                code_[jmp_at].arg = static_cast<std::int32_t>(code_.size());
                break;
            }
            case ExprNode::Kind::Call: {
                for (const auto& c : n.children) emit(c);
                if (n.name == "exp") code_.push_back({OpCode::Exp, 0, 0.0});
                else if (n.name == "ln") code_.push_back({OpCode::Ln, 0, 0.0});
                else if (n.name == "sqrt") code_.push_back({OpCode::Sqrt, 0, 0.0});
                else if (n.name == "abs") code_.push_back({OpCode::Abs, 0, 0.0});
                else if (n.name == "min") code_.push_back({OpCode::Min, 0, 0.0});
                else if (n.name == "max") code_.push_back({OpCode::Max, 0, 0.0});
                else code_.push_back({OpCode::Table, table_index_(n.name), 0.0});
                break;
            }
        }
    }

    std::vector<Instr> code_;
    const std::function<std::int32_t(const std::string&)>& value_slot_;
    const std::function<std::int32_t(const std::string&)>& table_index_;
};

} // namespace

ExprNode parse_expression(const std::string& text) {
    if (sdl::trim(text).empty()) throw ParseError("empty expression");
    return Parser(text).parse();
}

ExprRefs referenced_names(const ExprNode& root) {
    std::set<std::string> values;
    std::set<std::string> tables;
    collect_refs(root, values, tables);
    return {{values.begin(), values.end()}, {tables.begin(), tables.end()}};
}

ExprProgram compile_expression(
    const ExprNode& root,
    const std::function<std::int32_t(const std::string&)>& value_slot,
    const std::function<std::int32_t(const std::string&)>& table_index) {
    ExprProgram p;
    p.code_ = Compiler(value_slot, table_index).compile(root);
    std::uint32_t depth = 0;
    std::uint32_t peak = 1;
    for (const auto& ins : p.code_) {
        switch (ins.op) {
            case OpCode::PushConst:
            case OpCode::Load: ++depth; break;
            case OpCode::Add: case OpCode::Sub: case OpCode::Mul: case OpCode::Div:
            case OpCode::Pow: case OpCode::Min: case OpCode::Max:
            case OpCode::Lt: case OpCode::Le: case OpCode::Gt: case OpCode::Ge:
            case OpCode::EqCmp: case OpCode::NeCmp:
            case OpCode::JumpIfZero: --depth; break;
            default: break;
        }
        peak = std::max(peak, depth);
    }
    p.stack_need_ = peak;
    if (peak > 64) {
        throw ParseError("expression too deeply nested (needs " + std::to_string(peak) +
                         " stack slots, limit 64)");
    }
    return p;
}

double ExprProgram::eval(const double* slots, const std::vector<LookupTable>& tables) const {
    double stack[64];
    std::size_t sp = 0;
    const Instr* pc = code_.data();
    const Instr* end = pc + code_.size();
    while (pc != end) {
        switch (pc->op) {
            case OpCode::PushConst: stack[sp++] = pc->value; break;
            case OpCode::Load: stack[sp++] = slots[pc->arg]; break;
            case OpCode::Add: --sp; stack[sp - 1] += stack[sp]; break;
            case OpCode::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case OpCode::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case OpCode::Div: --sp; stack[sp - 1] /= stack[sp]; break;
            case OpCode::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
            case OpCode::Neg: stack[sp - 1] = -stack[sp - 1]; break;
            case OpCode::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
            case OpCode::Ln: stack[sp - 1] = std::log(stack[sp - 1]); break;
            case OpCode::Sqrt: stack[sp - 1] = std::sqrt(stack[sp - 1]); break;
            case OpCode::Abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
            case OpCode::Min: --sp; stack[sp - 1] = std::min(stack[sp - 1], stack[sp]); break;
            case OpCode::Max: --sp; stack[sp - 1] = std::max(stack[sp - 1], stack[sp]); break;
            case OpCode::Lt: --sp; stack[sp - 1] = stack[sp - 1] < stack[sp] ? 1.0 : 0.0; break;
            case OpCode::Le: --sp; stack[sp - 1] = stack[sp - 1] <= stack[sp] ? 1.0 : 0.0; break;
            case OpCode::Gt: --sp; stack[sp - 1] = stack[sp - 1] > stack[sp] ? 1.0 : 0.0; break;
            case OpCode::Ge: --sp; stack[sp - 1] = stack[sp - 1] >= stack[sp] ? 1.0 : 0.0; break;
            case OpCode::EqCmp: --sp; stack[sp - 1] = stack[sp - 1] == stack[sp] ? 1.0 : 0.0; break;
            case OpCode::NeCmp: --sp; stack[sp - 1] = stack[sp - 1] != stack[sp] ? 1.0 : 0.0; break;
            case OpCode::JumpIfZero:
                --sp;
                if (stack[sp] == 0.0) {
                    pc = code_.data() + pc->arg;
                    continue;
                }
                break;
            case OpCode::Jump:
                pc = code_.data() + pc->arg;
                continue;
            case OpCode::Table: stack[sp - 1] = tables[pc->arg](stack[sp - 1]); break;
        }
        ++pc;
    }
    return stack[0];
}

} // namespace worldsim
