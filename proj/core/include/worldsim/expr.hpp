#pragma once

#include "worldsim/table.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace worldsim {

// Arithmetic expression language used by model definitions:
//   + - * / ^   unary -
//   exp(x) ln(x) min(a,b) max(a,b) abs(x) sqrt(x)
//   if(cond, then, else) with comparisons < <= > >= == != inside cond
//   name            -> stock / auxiliary / flow / parameter / "time"
//   tablename(x)    -> piecewise-linear table application
struct ExprNode {
    enum class Kind { Number, Name, Unary, Binary, Compare, If, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name;  // identifier, operator spelling, or function name
    std::vector<ExprNode> children;
};

ExprNode parse_expression(const std::string& text);

// Names referenced by the expression, split into plain value references and
// table applications. "time" counts as a value reference.
struct ExprRefs {
    std::vector<std::string> values;
    std::vector<std::string> tables;
};
ExprRefs referenced_names(const ExprNode& root);

enum class OpCode : std::uint8_t {
    PushConst,
    Load,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Min,
    Max,
    Lt,
    Le,
    Gt,
    Ge,
    EqCmp,
    NeCmp,
    JumpIfZero,
    Jump,
    Table,
};

struct Instr {
    OpCode op;
    std::int32_t arg = 0;  // slot index, table index, or jump target
    double value = 0.0;
};

// Flat postfix program over a slot array; the hot path of every simulation.
class ExprProgram {
public:
    ExprProgram() = default;

    double eval(const double* slots, const std::vector<LookupTable>& tables) const;

    bool empty() const { return code_.empty(); }
    const std::vector<Instr>& code() const { return code_; }

    friend ExprProgram compile_expression(
        const ExprNode& root,
        const std::function<std::int32_t(const std::string&)>& value_slot,
        const std::function<std::int32_t(const std::string&)>& table_index);

private:
    std::vector<Instr> code_;
    std::uint32_t stack_need_ = 0;
};

// Resolvers map names to slot / table indices and throw UnknownReferenceError
// for undeclared names.
ExprProgram compile_expression(
    const ExprNode& root,
    const std::function<std::int32_t(const std::string&)>& value_slot,
    const std::function<std::int32_t(const std::string&)>& table_index);

} // namespace worldsim
