#include "roundreach/qbf.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace roundreach {

// ---------------------------------------------------------------------------
// Expressions

std::size_t BoolExpr::add(ExprNode node)
{
    nodes.push_back(node);
    return nodes.size() - 1;
}

bool BoolExpr::evaluate(const std::vector<bool>& assignment) const
{
    std::vector<char> value(nodes.size(), 0);
    for (std::size_t i = 0; i <= root; ++i) {
        const auto& n = nodes[i];
        switch (n.kind) {
        case ExprKind::Var:
            value[i] = assignment.at(n.value) ? 1 : 0;
            break;
        case ExprKind::Const:
            value[i] = n.value != 0 ? 1 : 0;
            break;
        case ExprKind::Not:
            value[i] = value[n.lhs] != 0 ? 0 : 1;
            break;
        case ExprKind::And:
            value[i] = (value[n.lhs] != 0 && value[n.rhs] != 0) ? 1 : 0;
            break;
        case ExprKind::Or:
            value[i] = (value[n.lhs] != 0 || value[n.rhs] != 0) ? 1 : 0;
            break;
        }
    }
    return value[root] != 0;
}

namespace {

bool is_operator(ExprKind k)
{
    return k == ExprKind::Not || k == ExprKind::And || k == ExprKind::Or;
}

std::vector<bool> reachable(const BoolExpr& e)
{
    std::vector<bool> seen(e.nodes.size(), false);
    if (e.nodes.empty()) {
        return seen;
    }
    seen[e.root] = true;
    for (std::size_t i = e.root + 1; i-- > 0;) {
        if (!seen[i]) {
            continue;
        }
        const auto& n = e.nodes[i];
        if (is_operator(n.kind)) {
            seen[n.lhs] = true;
            if (n.kind != ExprKind::Not) {
                seen[n.rhs] = true;
            }
        }
    }
    return seen;
}

} // namespace

std::size_t BoolExpr::operator_count() const
{
    const auto seen = reachable(*this);
    std::size_t count = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (seen[i] && is_operator(nodes[i].kind)) {
            ++count;
        }
    }
    return count;
}

std::size_t BoolExpr::max_variable() const
{
    std::size_t out = 0;
    for (const auto& n : nodes) {
        if (n.kind == ExprKind::Var) {
            out = std::max(out, n.value + 1);
        }
    }
    return out;
}

bool QbfFormula::is_canonical() const
{
    if (prefix.empty() || prefix.front() != Quantifier::ForAll || prefix.back() != Quantifier::Exists) {
        return false;
    }
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        if (prefix[i] == prefix[i - 1]) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class FormulaBuilder {
public:
    std::size_t variable(const std::string& name)
    {
        auto it = index_.find(name);
        if (it != index_.end()) {
            return it->second;
        }
        const auto id = names_.size();
        index_.emplace(name, id);
        names_.push_back(name);
        return id;
    }

    void quantify(Quantifier q, const std::string& name)
    {
        const auto id = variable(name);
        if (quantified_.count(id) != 0) {
            fail(ErrorCode::Parse, "variable " + name + " is quantified twice");
        }
        quantified_[id] = q;
        order_.push_back(id);
    }

    // Free variables come first, bound existentially.
    QbfFormula finish(BoolExpr matrix) const
    {
        std::vector<std::size_t> order;
        for (std::size_t id = 0; id < names_.size(); ++id) {
            if (quantified_.count(id) == 0) {
                order.push_back(id);
            }
        }
        order.insert(order.end(), order_.begin(), order_.end());
        std::vector<std::size_t> remap(names_.size());
        QbfFormula f;
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            remap[order[pos]] = pos;
            auto q = quantified_.find(order[pos]);
            f.prefix.push_back(q == quantified_.end() ? Quantifier::Exists : q->second);
            f.names.push_back(names_[order[pos]]);
        }
        for (auto& n : matrix.nodes) {
            if (n.kind == ExprKind::Var) {
                n.value = remap[n.value];
            }
        }
        f.matrix = std::move(matrix);
        return f;
    }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::string> names_;
    std::map<std::size_t, Quantifier> quantified_;
    std::vector<std::size_t> order_;
};

class TextParser {
public:
    explicit TextParser(std::string_view text) : text_(text) {}

    QbfFormula parse()
    {
        FormulaBuilder builder;
        builder_ = &builder;
        // Optional prefix.
        std::size_t save = pos_;
        auto word = peek_word();
        if (word == "forall" || word == "exists") {
            while (true) {
                word = peek_word();
                Quantifier q;
                if (word == "forall") {
                    q = Quantifier::ForAll;
                } else if (word == "exists") {
                    q = Quantifier::Exists;
                } else {
                    break;
                }
                take_word();
                std::size_t count = 0;
                while (true) {
                    skip_space();
                    if (pos_ < text_.size() && (text_[pos_] == ':' || text_[pos_] == '.')) {
                        break;
                    }
                    const auto name = peek_word();
                    if (name.empty() || name == "forall" || name == "exists") {
                        break;
                    }
                    take_word();
                    builder.quantify(q, name);
                    ++count;
                    skip_space();
                    if (pos_ < text_.size() && text_[pos_] == ',') {
                        ++pos_;
                    }
                }
                if (count == 0) {
                    fail(ErrorCode::Parse, "quantifier without variables");
                }
            }
            skip_space();
            if (pos_ >= text_.size() || (text_[pos_] != ':' && text_[pos_] != '.')) {
                fail(ErrorCode::Parse, "expected ':' after the quantifier prefix");
            }
            ++pos_;
        } else {
            pos_ = save;
        }
        BoolExpr expr;
        expr_ = &expr;
        expr.root = parse_or();
        skip_space();
        if (pos_ != text_.size()) {
            fail(ErrorCode::Parse, "unexpected text at offset " + std::to_string(pos_));
        }
        return builder.finish(std::move(expr));
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

    std::string peek_word()
    {
        skip_space();
        std::size_t end = pos_;
        while (end < text_.size() && word_char(text_[end])) {
            ++end;
        }
        return std::string(text_.substr(pos_, end - pos_));
    }

    void take_word()
    {
        skip_space();
        while (pos_ < text_.size() && word_char(text_[pos_])) {
            ++pos_;
        }
    }

    bool take(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == c && (c == '&' || c == '|')) {
                ++pos_;
            }
            return true;
        }
        return false;
    }

    std::size_t parse_or()
    {
        auto lhs = parse_and();
        while (take('|')) {
            const auto rhs = parse_and();
            lhs = expr_->add({ExprKind::Or, 0, lhs, rhs});
        }
        return lhs;
    }

    std::size_t parse_and()
    {
        auto lhs = parse_unary();
        while (take('&')) {
            const auto rhs = parse_unary();
            lhs = expr_->add({ExprKind::And, 0, lhs, rhs});
        }
        return lhs;
    }

    std::size_t parse_unary()
    {
        if (take('!') || take('~')) {
            const auto inner = parse_unary();
            return expr_->add({ExprKind::Not, 0, inner, 0});
        }
        if (take('(')) {
            const auto inner = parse_or();
            if (!take(')')) {
                fail(ErrorCode::Parse, "missing ')'");
            }
            return inner;
        }
        const auto word = peek_word();
        if (word.empty()) {
            fail(ErrorCode::Parse, "expected a variable, constant or '(' at offset " + std::to_string(pos_));
        }
        take_word();
        if (word == "true" || word == "1") {
            return expr_->add({ExprKind::Const, 1, 0, 0});
        }
        if (word == "false" || word == "0") {
            return expr_->add({ExprKind::Const, 0, 0, 0});
        }
        if (word == "forall" || word == "exists") {
            fail(ErrorCode::Parse, "quantifiers are only allowed in the prefix");
        }
        return expr_->add({ExprKind::Var, builder_->variable(word), 0, 0});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    FormulaBuilder* builder_ = nullptr;
    BoolExpr* expr_ = nullptr;
};

long parse_long(const std::string& token)
{
    try {
        std::size_t used = 0;
        const long v = std::stol(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::Parse, "expected an integer, got '" + token + "'");
    }
}

} // namespace

QbfFormula parse_qbf(std::string_view text)
{
    return TextParser(text).parse();
}

QbfFormula parse_qdimacs(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    long declared = 0;
    FormulaBuilder builder;
    BoolExpr expr;
    std::vector<std::size_t> clauses;
    std::vector<long> pending;
    auto literal = [&](long lit) {
        if (lit == 0 || std::labs(lit) > declared) {
            fail(ErrorCode::Parse, "literal " + std::to_string(lit) + " out of range");
        }
        const auto var = expr.add({ExprKind::Var, builder.variable("x" + std::to_string(std::labs(lit))), 0, 0});
        return lit < 0 ? expr.add({ExprKind::Not, 0, var, 0}) : var;
    };
    auto close_clause = [&]() {
        if (pending.empty()) {
            clauses.push_back(expr.add({ExprKind::Const, 0, 0, 0}));
            return;
        }
        std::size_t node = literal(pending.front());
        for (std::size_t i = 1; i < pending.size(); ++i) {
            node = expr.add({ExprKind::Or, 0, node, literal(pending[i])});
        }
        clauses.push_back(node);
        pending.clear();
    };
    // Variables must be registered in declaration order before literals.
    std::vector<std::pair<Quantifier, long>> bound;
    std::vector<std::vector<long>> raw_clauses;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::string first;
        if (!(words >> first) || first == "c") {
            continue;
        }
        if (first == "p") {
            std::string fmt;
            long count = 0;
            if (!(words >> fmt >> declared >> count) || fmt != "cnf" || declared < 0) {
                fail(ErrorCode::Parse, "malformed problem line");
            }
            header = true;
            continue;
        }
        if (!header) {
            fail(ErrorCode::Parse, "QDIMACS input needs a 'p cnf' line first");
        }
        if (first == "a" || first == "e") {
            const Quantifier q = first == "a" ? Quantifier::ForAll : Quantifier::Exists;
            std::string tok;
            while (words >> tok) {
                const long v = parse_long(tok);
                if (v == 0) {
                    break;
                }
                if (v < 0 || v > declared) {
                    fail(ErrorCode::Parse, "quantified variable out of range");
                }
                bound.emplace_back(q, v);
            }
            continue;
        }
        std::vector<long>& clause = raw_clauses.emplace_back();
        long v = parse_long(first);
        std::string tok;
        while (true) {
            if (v == 0) {
                break;
            }
            clause.push_back(v);
            if (!(words >> tok)) {
                fail(ErrorCode::Parse, "clause not terminated by 0");
            }
            v = parse_long(tok);
        }
    }
    if (!header) {
        fail(ErrorCode::Parse, "missing 'p cnf' line");
    }
    for (long v = 1; v <= declared; ++v) {
        builder.variable("x" + std::to_string(v));
    }
    for (const auto& [q, v] : bound) {
        builder.quantify(q, "x" + std::to_string(v));
    }
    for (const auto& clause : raw_clauses) {
        pending = clause;
        close_clause();
    }
    if (clauses.empty()) {
        expr.root = expr.add({ExprKind::Const, 1, 0, 0});
    } else {
        std::size_t node = clauses.front();
        for (std::size_t i = 1; i < clauses.size(); ++i) {
            node = expr.add({ExprKind::And, 0, node, clauses[i]});
        }
        expr.root = node;
    }
    return builder.finish(std::move(expr));
}

QbfFormula parse_qbf_any(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::string first;
        std::string second;
        if ((words >> first >> second) && first == "p" && second == "cnf") {
            return parse_qdimacs(text);
        }
    }
    return parse_qbf(text);
}

std::string to_string(const QbfFormula& formula)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < formula.n(); ++i) {
        out << (formula.prefix[i] == Quantifier::ForAll ? "forall " : "exists ") << formula.names[i] << ' ';
    }
    out << ": ";
    const auto& nodes = formula.matrix.nodes;
    std::function<void(std::size_t)> emit = [&](std::size_t i) {
        const auto& n = nodes[i];
        switch (n.kind) {
        case ExprKind::Var:
            out << formula.names[n.value];
            break;
        case ExprKind::Const:
            out << (n.value != 0 ? "true" : "false");
            break;
        case ExprKind::Not:
            out << '!';
            emit(n.lhs);
            break;
        case ExprKind::And:
        case ExprKind::Or:
            out << '(';
            emit(n.lhs);
            out << (n.kind == ExprKind::And ? " & " : " | ");
            emit(n.rhs);
            out << ')';
            break;
        }
    };
    if (!nodes.empty()) {
        emit(formula.matrix.root);
    }
    return out.str();
}

QbfFormula pad_to_canonical(const QbfFormula& formula)
{
    QbfFormula out;
    std::vector<std::size_t> remap(formula.n());
    Quantifier expected = Quantifier::ForAll;
    std::size_t pads = 0;
    auto flip = [](Quantifier q) { return q == Quantifier::ForAll ? Quantifier::Exists : Quantifier::ForAll; };
    auto pad = [&]() {
        out.prefix.push_back(expected);
        out.names.push_back("_pad" + std::to_string(++pads));
        expected = flip(expected);
    };
    for (std::size_t i = 0; i < formula.n(); ++i) {
        while (formula.prefix[i] != expected) {
            pad();
        }
        remap[i] = out.prefix.size();
        out.prefix.push_back(expected);
        out.names.push_back(formula.names.size() > i ? formula.names[i] : "x" + std::to_string(i + 1));
        expected = flip(expected);
    }
    if (out.prefix.empty()) {
        pad();
    }
    if (expected == Quantifier::Exists) {
        pad();
    }
    out.matrix = formula.matrix;
    if (out.matrix.nodes.empty()) {
        out.matrix.root = out.matrix.add({ExprKind::Const, 1, 0, 0});
    }
    for (auto& n : out.matrix.nodes) {
        if (n.kind == ExprKind::Var) {
            n.value = remap.at(n.value);
        }
    }
    return out;
}

bool evaluate_qbf(const QbfFormula& formula, std::size_t limit)
{
    if (formula.n() > limit) {
        fail(ErrorCode::TooLarge, "brute-force QBF evaluation is limited to " + std::to_string(limit) + " variables");
    }
    if (formula.matrix.max_variable() > formula.n()) {
        fail(ErrorCode::InvalidArgument, "matrix uses an unquantified variable");
    }
    std::vector<bool> assignment(formula.n(), false);
    std::function<bool(std::size_t)> eval = [&](std::size_t i) -> bool {
        if (i == formula.n()) {
            return formula.matrix.evaluate(assignment);
        }
        assignment[i] = false;
        const bool zero = eval(i + 1);
        if (formula.prefix[i] == Quantifier::ForAll ? !zero : zero) {
            return zero;
        }
        assignment[i] = true;
        return eval(i + 1);
    };
    return eval(0);
}

// ---------------------------------------------------------------------------
// Gadgets

const char* family_name(GadgetFamily family) noexcept
{
    switch (family) {
    case GadgetFamily::Floor:
        return "floor";
    case GadgetFamily::Ceil:
        return "ceil";
    case GadgetFamily::MinimalError:
        return "minerr";
    }
    return "?";
}

GadgetFamily parse_family(std::string_view name)
{
    if (name == "floor") {
        return GadgetFamily::Floor;
    }
    if (name == "ceil") {
        return GadgetFamily::Ceil;
    }
    if (name == "minerr") {
        return GadgetFamily::MinimalError;
    }
    fail(ErrorCode::Parse, "unknown gadget family '" + std::string(name) + "' (floor, ceil, minerr)");
}

RealRounding family_rounding(GadgetFamily family) noexcept
{
    switch (family) {
    case GadgetFamily::Floor:
        return RealRounding::Floor;
    case GadgetFamily::Ceil:
        return RealRounding::Ceil;
    case GadgetFamily::MinimalError:
        return RealRounding::MinimalErrorUp;
    }
    return RealRounding::Floor;
}

namespace {

AffineRow normalize(const std::vector<std::pair<std::size_t, Rational>>& terms)
{
    std::map<std::size_t, Rational> merged;
    for (const auto& [slot, c] : terms) {
        merged[slot] += c;
    }
    AffineRow out;
    for (const auto& [slot, c] : merged) {
        if (sgn(c) != 0) {
            out.emplace_back(slot, c);
        }
    }
    return out;
}

void add_operand(std::vector<std::pair<std::size_t, Rational>>& terms, std::size_t true_slot, Operand x,
                 const Rational& scale)
{
    if (x.negated) {
        terms.emplace_back(true_slot, scale);
        terms.emplace_back(x.slot, -scale);
    } else {
        terms.emplace_back(x.slot, scale);
    }
}

} // namespace

AffineRow gadget_row(GadgetOp op, GadgetFamily family, std::size_t true_slot, Operand a, Operand b)
{
    std::vector<std::pair<std::size_t, Rational>> terms;
    auto pair = [&](const Rational& constant, const Rational& divisor) {
        terms.emplace_back(true_slot, constant / divisor);
        add_operand(terms, true_slot, a, 1 / divisor);
        add_operand(terms, true_slot, b, 1 / divisor);
    };
    switch (op) {
    case GadgetOp::Or:
        switch (family) {
        case GadgetFamily::Floor:
            pair(1, 2);
            break;
        case GadgetFamily::Ceil:
            pair(0, 2);
            break;
        case GadgetFamily::MinimalError:
            pair(1, 3);
            break;
        }
        break;
    case GadgetOp::And:
        switch (family) {
        case GadgetFamily::Floor:
            pair(1, 3);
            break;
        case GadgetFamily::Ceil:
            pair(-1, 2);
            break;
        case GadgetFamily::MinimalError:
            pair(0, 3);
            break;
        }
        break;
    case GadgetOp::Not:
        terms.emplace_back(true_slot, 1);
        add_operand(terms, true_slot, a, -1);
        break;
    case GadgetOp::Copy:
        add_operand(terms, true_slot, a, 1);
        break;
    case GadgetOp::Zero:
        break;
    }
    return normalize(terms);
}

Rational apply_row(const AffineRow& row, const std::vector<Rational>& values, RealRounding kind)
{
    Rational acc = 0;
    for (const auto& [slot, c] : row) {
        acc += c * values.at(slot);
    }
    return round_real(acc, kind, Rational(1));
}

// ---------------------------------------------------------------------------
// Programs

std::vector<Rational> Program::initial() const
{
    std::vector<Rational> v(t, Rational(0));
    v[true_slot] = 1;
    return v;
}

std::vector<Rational> Program::all_ones() const
{
    return std::vector<Rational>(t, Rational(1));
}

std::vector<Rational> Program::run_step(std::size_t step, const std::vector<Rational>& state) const
{
    const auto kind = family_rounding(family);
    std::vector<Rational> out(t);
    for (std::size_t v = 0; v < t; ++v) {
        out[v] = apply_row(steps.at(step)[v], state, kind);
    }
    return out;
}

std::vector<Rational> Program::run_sweep(std::vector<Rational> state) const
{
    for (std::size_t s = 0; s < steps.size(); ++s) {
        state = run_step(s, state);
    }
    return state;
}

namespace {

class ProgramBuilder {
public:
    ProgramBuilder(std::size_t n, std::size_t ell, GadgetFamily family) : n_(n), ell_(ell)
    {
        p_.n = n;
        p_.ell = ell;
        p_.family = family;
        p_.t = 4 * n + 15 + ell;
        p_.true_slot = p_.t - 1;
        p_.names.resize(p_.t);
        for (std::size_t i = 1; i <= n; ++i) {
            p_.names[x(i)] = "x" + std::to_string(i);
            p_.names[s(0, i)] = "s0_" + std::to_string(i);
            p_.names[s(1, i)] = "s1_" + std::to_string(i);
            p_.names[c(i)] = "c" + std::to_string(i);
        }
        p_.names[psi_hat()] = "psi";
        for (std::size_t j = 0; j < ell; ++j) {
            p_.names[psi_aux(j)] = "psi_aux" + std::to_string(j + 1);
        }
        for (std::size_t j = 0; j < 4; ++j) {
            p_.names[f2_aux(j)] = "sel_aux" + std::to_string(j + 1);
        }
        for (std::size_t j = 0; j < 8; ++j) {
            p_.names[carry_aux(j)] = "carry_aux" + std::to_string(j + 1);
        }
        p_.names[final_aux()] = "done_aux";
        p_.names[p_.true_slot] = "true";
    }

    std::size_t x(std::size_t i) const { return i - 1; }
    std::size_t psi_hat() const { return n_; }
    std::size_t s(int z, std::size_t i) const { return n_ + 1 + (z == 0 ? 0 : n_) + (i - 1); }
    std::size_t c(std::size_t i) const { return 3 * n_ + 1 + (i - 1); }
    std::size_t psi_aux(std::size_t j) const { return 4 * n_ + 1 + j; }
    std::size_t f2_aux(std::size_t j) const { return 4 * n_ + 1 + ell_ + j; }
    std::size_t carry_aux(std::size_t j) const { return 4 * n_ + 5 + ell_ + j; }
    std::size_t final_aux() const { return 4 * n_ + 13 + ell_; }
    std::size_t tru() const { return p_.true_slot; }

    Operand pos(std::size_t slot) const { return {slot, false}; }
    Operand neg(std::size_t slot) const { return {slot, true}; }

    std::vector<AffineRow>& step(const std::string& label)
    {
        std::vector<AffineRow> rows(p_.t);
        for (std::size_t v = 0; v < p_.t; ++v) {
            rows[v] = {{v, Rational(1)}};
        }
        p_.steps.push_back(std::move(rows));
        p_.step_labels.push_back(label);
        return p_.steps.back();
    }

    AffineRow gate(GadgetOp op, Operand a, Operand b = {}) const { return gadget_row(op, p_.family, tru(), a, b); }

    Program take() { return std::move(p_); }

private:
    std::size_t n_;
    std::size_t ell_;
    Program p_;
};

} // namespace

Program lower_qbf_to_program(const QbfFormula& formula, GadgetFamily family)
{
    if (!formula.is_canonical()) {
        fail(ErrorCode::NonCanonicalPrefix, "QBF prefix must alternate forall/exists, starting with forall and "
                                            "ending with exists (pad it first)");
    }
    const std::size_t n = formula.n();
    const auto& expr = formula.matrix;
    if (expr.max_variable() > n) {
        fail(ErrorCode::InvalidArgument, "matrix uses an unquantified variable");
    }
    const std::size_t ell = expr.operator_count();
    ProgramBuilder b(n, ell, family);

    // Evaluate the matrix, one operator per step.
    const auto seen = reachable(expr);
    std::unordered_map<std::size_t, std::size_t> aux_of;
    auto operand_of = [&](std::size_t node) -> Operand {
        const auto& e = expr.nodes[node];
        switch (e.kind) {
        case ExprKind::Var:
            return b.pos(b.x(e.value + 1));
        case ExprKind::Const:
            return e.value != 0 ? b.pos(b.tru()) : b.neg(b.tru());
        default:
            return b.pos(b.psi_aux(aux_of.at(node)));
        }
    };
    for (std::size_t i = 0; i <= expr.root; ++i) {
        const auto& e = expr.nodes[i];
        if (!seen[i] || !is_operator(e.kind)) {
            continue;
        }
        const auto slot = aux_of.size();
        aux_of[i] = slot;
        const GadgetOp op = e.kind == ExprKind::Not ? GadgetOp::Not
                            : e.kind == ExprKind::And ? GadgetOp::And
                                                      : GadgetOp::Or;
        AffineRow row = e.kind == ExprKind::Not ? b.gate(op, operand_of(e.lhs))
                                                : b.gate(op, operand_of(e.lhs), operand_of(e.rhs));
        auto& rows = b.step("evaluate matrix: operator " + std::to_string(slot + 1));
        rows[b.psi_aux(slot)] = row;
        if (i == expr.root) {
            rows[b.psi_hat()] = row;
        }
    }
    const Operand psi = ell > 0 ? b.pos(b.psi_hat()) : operand_of(expr.root);

    // Record psi into s_n^{x_n}, then increment x_n.
    {
        auto& rows = b.step("select s_n: products");
        rows[b.f2_aux(0)] = b.gate(GadgetOp::And, b.neg(b.x(n)), psi);
        rows[b.f2_aux(1)] = b.gate(GadgetOp::And, b.pos(b.x(n)), b.pos(b.s(0, n)));
        rows[b.f2_aux(2)] = b.gate(GadgetOp::And, b.pos(b.x(n)), psi);
        rows[b.f2_aux(3)] = b.gate(GadgetOp::And, b.neg(b.x(n)), b.pos(b.s(1, n)));
        if (ell == 0) {
            rows[b.psi_hat()] = b.gate(GadgetOp::Copy, psi);
        }
    }
    {
        auto& rows = b.step("select s_n: store, increment x_n");
        rows[b.s(0, n)] = b.gate(GadgetOp::Or, b.pos(b.f2_aux(0)), b.pos(b.f2_aux(1)));
        rows[b.s(1, n)] = b.gate(GadgetOp::Or, b.pos(b.f2_aux(2)), b.pos(b.f2_aux(3)));
        rows[b.x(n)] = b.gate(GadgetOp::Not, b.pos(b.x(n)));
        rows[b.c(n)] = b.gate(GadgetOp::Copy, b.pos(b.x(n)));
    }

    // Propagate the carry from x_{i+1} into x_i.
    for (std::size_t i = n - 1; i >= 1; --i) {
        const auto carry = b.c(i + 1);
        const auto xi = b.x(i);
        const GadgetOp combine = i % 2 == 0 ? GadgetOp::And : GadgetOp::Or;
        const std::string tag = "carry into x" + std::to_string(i);
        {
            auto& rows = b.step(tag + ": guards");
            rows[b.carry_aux(0)] = b.gate(GadgetOp::And, b.pos(carry), b.neg(xi));
            rows[b.carry_aux(1)] = b.gate(GadgetOp::And, b.pos(carry), b.pos(xi));
            rows[b.carry_aux(2)] = b.gate(combine, b.pos(b.s(0, i + 1)), b.pos(b.s(1, i + 1)));
            rows[b.carry_aux(3)] = b.gate(GadgetOp::And, b.neg(carry), b.pos(xi));
            rows[b.c(i)] = b.gate(GadgetOp::And, b.pos(carry), b.pos(xi));
        }
        {
            auto& rows = b.step(tag + ": select, flip x" + std::to_string(i));
            rows[b.carry_aux(4)] = b.gate(GadgetOp::And, b.pos(b.carry_aux(0)), b.pos(b.carry_aux(2)));
            rows[b.carry_aux(5)] = b.gate(GadgetOp::And, b.neg(b.carry_aux(0)), b.pos(b.s(0, i)));
            rows[b.carry_aux(6)] = b.gate(GadgetOp::And, b.pos(b.carry_aux(1)), b.pos(b.carry_aux(2)));
            rows[b.carry_aux(7)] = b.gate(GadgetOp::And, b.neg(b.carry_aux(1)), b.pos(b.s(1, i)));
            rows[xi] = b.gate(GadgetOp::Or, b.pos(b.carry_aux(0)), b.pos(b.carry_aux(3)));
            rows[carry] = b.gate(GadgetOp::Zero, {});
        }
        {
            auto& rows = b.step(tag + ": store s" + std::to_string(i));
            rows[b.s(0, i)] = b.gate(GadgetOp::Or, b.pos(b.carry_aux(4)), b.pos(b.carry_aux(5)));
            rows[b.s(1, i)] = b.gate(GadgetOp::Or, b.pos(b.carry_aux(6)), b.pos(b.carry_aux(7)));
        }
    }

    // Everything becomes 1 once both values of x_1 succeed.
    {
        auto& rows = b.step("finish: test s_1");
        rows[b.final_aux()] = b.gate(GadgetOp::And, b.pos(b.s(0, 1)), b.pos(b.s(1, 1)));
    }
    Program program = b.take();
    {
        std::vector<AffineRow> rows(program.t);
        for (std::size_t v = 0; v < program.t; ++v) {
            rows[v] = v == program.true_slot
                          ? AffineRow{{v, Rational(1)}}
                          : gadget_row(GadgetOp::Or, family, program.true_slot, {4 * n + 13 + ell, false}, {v, false});
        }
        program.steps.push_back(std::move(rows));
        program.step_labels.push_back("finish: set all");
    }
    ensure(program.m() == 3 * n + 1 + ell, "instruction count differs from 3n+1+ell");
    return program;
}

std::size_t hardness_dimension(std::size_t n, std::size_t ell)
{
    return (3 * n + 1 + ell) * (4 * n + 15 + ell);
}

HardnessInstance explode_program_to_matrix(const Program& program)
{
    const std::size_t m = program.m();
    const std::size_t t = program.t;
    if (m == 0 || t == 0) {
        fail(ErrorCode::InvalidArgument, "program has no instructions or variables");
    }
    RowSparseMatrix matrix(m * t);
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t to = ((s + 1) % m) * t;
        const std::size_t from = s * t;
        for (std::size_t v = 0; v < t; ++v) {
            for (const auto& [slot, coef] : program.steps[s][v]) {
                matrix.set(to + v, from + slot, coef);
            }
        }
    }
    RationalVector initial(m * t, Rational(0));
    RationalVector target(m * t, Rational(0));
    const auto start = program.initial();
    for (std::size_t v = 0; v < t; ++v) {
        initial[v] = start[v];
        target[v] = 1;
    }
    HardnessMeta meta{program.n, program.ell, m, t, m * t, program.family, Rational(1)};
    RoundingSpec spec = RoundingSpec::argand(family_rounding(program.family), Rational(1));
    return {RationalSystem(std::move(matrix), std::move(initial), std::move(target), spec), meta};
}

bool perturbation_preserves(const Program& program, const Rational& factor)
{
    const auto kind = family_rounding(program.family);
    std::vector<Rational> values(program.t, Rational(0));
    for (const auto& step : program.steps) {
        for (const auto& row : step) {
            std::vector<std::size_t> support;
            for (const auto& [slot, coef] : row) {
                if (slot != program.true_slot) {
                    support.push_back(slot);
                }
            }
            if (support.size() > 20) {
                fail(ErrorCode::TooLarge, "row depends on too many variables to validate");
            }
            AffineRow scaled = row;
            for (auto& term : scaled) {
                term.second *= factor;
            }
            values[program.true_slot] = 1;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << support.size()); ++mask) {
                for (std::size_t k = 0; k < support.size(); ++k) {
                    values[support[k]] = ((mask >> k) & 1U) != 0 ? 1 : 0;
                }
                if (apply_row(row, values, kind) != apply_row(scaled, values, kind)) {
                    return false;
                }
            }
            for (auto slot : support) {
                values[slot] = 0;
            }
            // An inactive copy (all zero, including its true slot) must stay zero.
            values[program.true_slot] = 0;
            if (apply_row(scaled, values, kind) != 0) {
                return false;
            }
        }
    }
    return true;
}

HardnessInstance perturb(const HardnessInstance& instance, const Program& program, const Rational& factor)
{
    if (sgn(factor) <= 0) {
        fail(ErrorCode::InvalidArgument, "perturbation factor must be positive");
    }
    if (!perturbation_preserves(program, factor)) {
        fail(ErrorCode::GadgetBroken, "scaling by " + to_string(factor) + " changes a gadget truth table");
    }
    const auto& sys = instance.system;
    HardnessInstance out{RationalSystem(sys.matrix().scaled(factor), sys.raw_initial(), sys.raw_target(), sys.spec()),
                         instance.meta};
    out.meta.factor = instance.meta.factor * factor;
    return out;
}

} // namespace roundreach
