#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seedsel/ast.hpp"
#include "seedsel/cfg.hpp"
#include "seedsel/error.hpp"
#include "seedsel/token.hpp"

namespace seedsel {

// Recursive-descent parser for the mini language:
//
//   program  := (funcdecl | stmt)*
//   funcdecl := "func" IDENT "(" [IDENT ("," IDENT)*] ")" block
//   stmt     := block | ifstmt | whilestmt | simple ";"
//   simple   := IDENT "=" expr | call
//   ifstmt   := "if" "(" expr ")" stmt ["else" stmt]
//   whilestmt:= "while" "(" expr ")" stmt
//   block    := "{" stmt* "}"
//
// Expressions use C-style precedence: || < && < == != < relational <
// additive < multiplicative < unary (! -) < primary. A bare expression is
// only a statement when it is a call. AST node kinds: program, func, param,
// block, assign, if, while, call, binary, unary, ident, number, string,
// char.
namespace detail {

enum class TokClass { ident, number, string, chr, punct, eof };

inline TokClass classify(const Token& t) {
    const char c = t.text.empty() ? '\0' : t.text[0];
    if (is_ident_start(c)) return TokClass::ident;
    if (is_digit(c)) return TokClass::number;
    if (c == '"') return TokClass::string;
    if (c == '\'') return TokClass::chr;
    return TokClass::punct;
}

class MiniParser {
public:
    explicit MiniParser(const std::string& source) : toks_(scan(source)) {}

    AstNode parse_program() {
        AstNode prog{"program", {}};
        while (!at_end()) {
            if (is_word("func")) prog.children.push_back(parse_funcdecl());
            else prog.children.push_back(parse_stmt());
        }
        return prog;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& peek() const { return toks_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        if (at_end()) {
            std::size_t line = 1, col = 1;
            if (!toks_.empty()) {
                line = toks_.back().line;
                col = toks_.back().col + toks_.back().text.size();
            }
            throw Error("syntax", "line " + std::to_string(line) + " col " + std::to_string(col) +
                                      ": " + msg + " (unexpected end of input)");
        }
        throw Error("syntax", "line " + std::to_string(peek().line) + " col " +
                                  std::to_string(peek().col) + ": " + msg + " (got \"" +
                                  peek().text + "\")");
    }

    bool is_text(const char* s) const { return !at_end() && peek().text == s; }
    bool is_word(const char* s) const {
        return !at_end() && classify(peek()) == TokClass::ident && peek().text == s;
    }

    Token take() {
        if (at_end()) fail("unexpected end of input");
        return toks_[pos_++];
    }

    void expect(const char* s, const char* what) {
        if (!is_text(s)) fail(std::string("expected \"") + s + "\" " + what);
        ++pos_;
    }

    Token expect_ident(const char* what) {
        if (at_end() || classify(peek()) != TokClass::ident)
            fail(std::string("expected identifier ") + what);
        return take();
    }

    AstNode parse_funcdecl() {
        ++pos_; // "func"
        expect_ident("after \"func\"");
        expect("(", "to open the parameter list");
        AstNode fn{"func", {}};
        if (!is_text(")")) {
            for (;;) {
                expect_ident("in parameter list");
                fn.children.push_back(AstNode{"param", {}});
                if (is_text(",")) { ++pos_; continue; }
                break;
            }
        }
        expect(")", "to close the parameter list");
        if (!is_text("{")) fail("expected \"{\" to start the function body");
        fn.children.push_back(parse_block());
        return fn;
    }

    AstNode parse_stmt() {
        if (is_word("func")) fail("function declarations are only allowed at top level");
        if (is_text("{")) return parse_block();
        if (is_word("if")) return parse_if();
        if (is_word("while")) return parse_while();
        AstNode s = parse_simple();
        expect(";", "after statement");
        return s;
    }

    AstNode parse_block() {
        expect("{", "to open a block");
        AstNode block{"block", {}};
        while (!is_text("}")) {
            if (at_end()) fail("expected \"}\" to close the block");
            block.children.push_back(parse_stmt());
        }
        ++pos_; // "}"
        return block;
    }

    AstNode parse_if() {
        ++pos_; // "if"
        expect("(", "after \"if\"");
        AstNode node{"if", {}};
        node.children.push_back(parse_expr());
        expect(")", "after the condition");
        node.children.push_back(parse_stmt());
        if (is_word("else")) {
            ++pos_;
            node.children.push_back(parse_stmt());
        }
        return node;
    }

    AstNode parse_while() {
        ++pos_; // "while"
        expect("(", "after \"while\"");
        AstNode node{"while", {}};
        node.children.push_back(parse_expr());
        expect(")", "after the condition");
        node.children.push_back(parse_stmt());
        return node;
    }

    AstNode parse_simple() {
        if (!at_end() && classify(peek()) == TokClass::ident && pos_ + 1 < toks_.size() &&
            toks_[pos_ + 1].text == "=") {
            ++pos_; // target
            ++pos_; // "="
            AstNode assign{"assign", {}};
            assign.children.push_back(AstNode{"ident", {}});
            assign.children.push_back(parse_expr());
            return assign;
        }
        AstNode e = parse_expr();
        if (e.kind != "call") fail("expected an assignment or a call statement");
        return e;
    }

    AstNode parse_expr() { return parse_binary(0); }

    // Levels: 0 ||, 1 &&, 2 == !=, 3 < <= > >=, 4 + -, 5 * / %.
    bool level_has(int level, const std::string& op) const {
        switch (level) {
            case 0: return op == "||";
            case 1: return op == "&&";
            case 2: return op == "==" || op == "!=";
            case 3: return op == "<" || op == "<=" || op == ">" || op == ">=";
            case 4: return op == "+" || op == "-";
            case 5: return op == "*" || op == "/" || op == "%";
        }
        return false;
    }

    AstNode parse_binary(int level) {
        if (level > 5) return parse_unary();
        AstNode lhs = parse_binary(level + 1);
        while (!at_end() && classify(peek()) == TokClass::punct && level_has(level, peek().text)) {
            ++pos_;
            AstNode node{"binary", {}};
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_binary(level + 1));
            lhs = std::move(node);
        }
        return lhs;
    }

    AstNode parse_unary() {
        if (is_text("!") || is_text("-")) {
            ++pos_;
            AstNode node{"unary", {}};
            node.children.push_back(parse_unary());
            return node;
        }
        return parse_primary();
    }

    AstNode parse_primary() {
        if (at_end()) fail("expected an expression");
        switch (classify(peek())) {
            case TokClass::number: ++pos_; return AstNode{"number", {}};
            case TokClass::string: ++pos_; return AstNode{"string", {}};
            case TokClass::chr: ++pos_; return AstNode{"char", {}};
            case TokClass::ident: {
                ++pos_;
                if (is_text("(")) {
                    ++pos_;
                    AstNode call{"call", {}};
                    call.children.push_back(AstNode{"ident", {}});
                    if (!is_text(")")) {
                        for (;;) {
                            call.children.push_back(parse_expr());
                            if (is_text(",")) { ++pos_; continue; }
                            break;
                        }
                    }
                    expect(")", "to close the argument list");
                    return call;
                }
                return AstNode{"ident", {}};
            }
            case TokClass::punct:
                if (is_text("(")) {
                    ++pos_;
                    AstNode e = parse_expr();
                    expect(")", "to close the parenthesized expression");
                    return e;
                }
                fail("expected an expression");
            default: fail("expected an expression");
        }
    }
};

// Lowers an AST to a control-flow graph. One node per simple statement,
// labelled by its normalized kind: assignments "assign", call statements
// "invoke"; "if" nodes branch to both arms, "while" nodes loop through
// their body back to themselves. Function bodies become disjoint subgraphs;
// a while with an empty body becomes a self-loop.
class CfgLowering {
public:
    CfgGraph run(const AstNode& program) {
        lower_sequence(program.children, {});
        return std::move(graph_);
    }

private:
    CfgGraph graph_;

    using Exits = std::vector<std::uint32_t>;

    void wire(const Exits& from, std::uint32_t to) {
        for (const auto x : from) graph_.add_edge(x, to);
    }

    // Lowers one statement; `incoming` are the nodes whose control reaches
    // it. Returns the statement's exits, or `incoming` unchanged for
    // constructs that add no flow node (declarations, empty blocks).
    Exits lower_stmt(const AstNode& stmt, Exits incoming) {
        if (stmt.kind == "assign" || stmt.kind == "call") {
            const auto n = graph_.add_node(stmt.kind == "assign" ? "assign" : "invoke");
            wire(incoming, n);
            return {n};
        }
        if (stmt.kind == "block") return lower_sequence(stmt.children, std::move(incoming));
        if (stmt.kind == "if") {
            const auto n = graph_.add_node("if");
            wire(incoming, n);
            Exits then_exits = lower_stmt(stmt.children[1], {n});
            if (stmt.children.size() > 2) {
                Exits else_exits = lower_stmt(stmt.children[2], {n});
                then_exits.insert(then_exits.end(), else_exits.begin(), else_exits.end());
                return then_exits;
            }
            then_exits.push_back(n);
            return then_exits;
        }
        if (stmt.kind == "while") {
            const auto n = graph_.add_node("while");
            wire(incoming, n);
            const Exits body_exits = lower_stmt(stmt.children[1], {n});
            wire(body_exits, n);
            return {n};
        }
        if (stmt.kind == "func") {
            lower_sequence(stmt.children.back().children, {});
            return incoming;
        }
        throw Error("validation", "cannot lower node kind \"" + stmt.kind + "\"");
    }

    Exits lower_sequence(const std::vector<AstNode>& stmts, Exits incoming) {
        for (const auto& s : stmts) incoming = lower_stmt(s, std::move(incoming));
        return incoming;
    }
};

} // namespace detail

inline AstNode parse_source(const std::string& source) {
    return detail::MiniParser(source).parse_program();
}

inline CfgGraph lower_to_cfg(const AstNode& program) {
    return detail::CfgLowering().run(program);
}

struct FrontendRepr {
    AstNode ast;
    CfgGraph cfg;
};

inline FrontendRepr build_frontend_repr(const std::string& source) {
    FrontendRepr r;
    r.ast = parse_source(source);
    r.cfg = lower_to_cfg(r.ast);
    return r;
}

} // namespace seedsel
