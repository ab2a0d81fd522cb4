#include "groupform/dsl.hpp"

#include <cctype>
#include <cstdint>

namespace groupform::dsl {

namespace {

enum class TokKind { ident, number, date, string, op, lparen, rparen, end, bad };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;   // raw spelling (string tokens: the unquoted body)
    SourceSpan span;
};

class Lexer {
public:
    Lexer(std::string_view src, std::vector<ParseDiagnostic>& diagnostics)
        : diagnostics(diagnostics), src_(src) {}

    std::vector<ParseDiagnostic>& diagnostics;

    Token next() {
        skip_space();
        Token tok;
        tok.span = here(0);
        if (pos_ >= src_.size()) {
            tok.kind = TokKind::end;
            return tok;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number_or_date(false);
        if (c == '-' && pos_ + 1 < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            return lex_number_or_date(true);
        }
        if (c == '"') return lex_string();
        if (c == '(') return single(TokKind::lparen);
        if (c == ')') return single(TokKind::rparen);
        if (c == '=' ) return single(TokKind::op);
        if (c == '!' || c == '<' || c == '>') return lex_relop();
        Token bad = single(TokKind::bad);
        diagnostics.push_back({bad.span, "unexpected character", Severity::error});
        return bad;
    }

private:
    SourceSpan here(std::size_t length) const {
        return {line_, static_cast<int>(pos_ - line_start_) + 1, static_cast<int>(length)};
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
                line_start_ = pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    Token single(TokKind kind) {
        Token tok{kind, std::string(src_.substr(pos_, 1)), here(1)};
        ++pos_;
        return tok;
    }

    Token lex_ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        Token tok{TokKind::ident, std::string(src_.substr(start, pos_ - start)), {}};
        tok.span = span_from(start);
        return tok;
    }

    Token lex_number_or_date(bool negative) {
        std::size_t start = pos_;
        // A date is exactly dddd-dd-dd; probe before consuming as a number.
        if (!negative && matches_date_shape()) {
            Token tok{TokKind::date, std::string(src_.substr(start, 10)), {}};
            pos_ += 10;
            tok.span = span_from(start);
            return tok;
        }
        if (negative) ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
        }
        Token tok{TokKind::number, std::string(src_.substr(start, pos_ - start)), {}};
        tok.span = span_from(start);
        return tok;
    }

    bool matches_date_shape() const {
        if (pos_ + 10 > src_.size()) return false;
        std::string_view v = src_.substr(pos_, 10);
        if (!Date::looks_like_date(v)) return false;
        // Reject when a digit or '-' follows: that is a longer token.
        if (pos_ + 10 < src_.size()) {
            char after = src_[pos_ + 10];
            if (std::isdigit(static_cast<unsigned char>(after)) || after == '-') return false;
        }
        return true;
    }

    Token lex_string() {
        std::size_t start = pos_;
        ++pos_;  // opening quote
        std::size_t body = pos_;
        while (pos_ < src_.size() && src_[pos_] != '"') {
            if (src_[pos_] == '\n') {
                ++line_;
                line_start_ = pos_ + 1;
            }
            ++pos_;
        }
        if (pos_ >= src_.size()) {
            Token tok{TokKind::bad, std::string(src_.substr(start)), {}};
            tok.span = span_from(start);
            diagnostics.push_back({tok.span, "unterminated string literal", Severity::error});
            return tok;
        }
        Token tok{TokKind::string, std::string(src_.substr(body, pos_ - body)), {}};
        ++pos_;  // closing quote
        tok.span = span_from(start);
        return tok;
    }

    Token lex_relop() {
        std::size_t start = pos_;
        char c = src_[pos_];
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '=') {
            ++pos_;
        } else if (c == '!') {
            Token tok{TokKind::bad, "!", {}};
            tok.span = span_from(start);
            diagnostics.push_back({tok.span, "expected '!=' ", Severity::error});
            return tok;
        }
        Token tok{TokKind::op, std::string(src_.substr(start, pos_ - start)), {}};
        tok.span = span_from(start);
        return tok;
    }

    SourceSpan span_from(std::size_t start) const {
        return {line_, static_cast<int>(start - line_start_) + 1,
                static_cast<int>(pos_ - start)};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src, diagnostics) {
        advance();
        advance();
    }

    std::vector<ParseDiagnostic> diagnostics;

    std::optional<ItemPredicate> item_predicate() {
        auto pred = predicate<ItemPredicate>();
        if (!pred) return std::nullopt;
        if (!expect_end()) return std::nullopt;
        return pred;
    }

    std::optional<GroupConstraint> group_constraint() {
        std::optional<GroupConstraint> out;
        if (cur_.kind == TokKind::ident && cur_.text == "include") {
            auto composite = parse_composite();
            if (!composite) return std::nullopt;
            out = GroupConstraint(*composite);
        } else if (at_aggregation()) {
            auto agg = parse_aggregation();
            if (!agg) return std::nullopt;
            out = GroupConstraint(*agg);
        } else {
            auto pred = predicate<ValuePredicate>();
            if (!pred) return std::nullopt;
            out = GroupConstraint(*pred);
        }
        if (!expect_end()) return std::nullopt;
        return out;
    }

private:
    void advance() {
        cur_ = next_;
        next_ = lexer_.next();
        if (next_.kind == TokKind::bad) {
            // lexer already reported; stop at a synthetic end token
            next_.kind = TokKind::end;
            failed_lex_ = true;
        }
    }

    void error(const std::string& message) {
        diagnostics.push_back({cur_.span, message, Severity::error});
    }

    bool expect_end() {
        if (failed_lex_) return false;
        if (cur_.kind != TokKind::end) {
            error("unexpected trailing input");
            return false;
        }
        return true;
    }

    bool eat_keyword(const std::string& word) {
        if (cur_.kind == TokKind::ident && cur_.text == word) {
            advance();
            return true;
        }
        error("expected '" + word + "'");
        return false;
    }

    bool at_aggregation() {
        if (cur_.kind != TokKind::ident || next_.kind != TokKind::lparen) return false;
        return cur_.text == "avg" || cur_.text == "sum" || cur_.text == "min" ||
               cur_.text == "max" || cur_.text == "count";
    }

    std::optional<CmpOp> parse_op(bool aggregation_position) {
        CmpOp op;
        if (cur_.kind == TokKind::op) {
            if (cur_.text == "=") op = CmpOp::eq;
            else if (cur_.text == "!=") op = CmpOp::neq;
            else if (cur_.text == "<") op = CmpOp::lt;
            else if (cur_.text == "<=") op = CmpOp::leq;
            else if (cur_.text == ">") op = CmpOp::gt;
            else op = CmpOp::geq;
        } else if (cur_.kind == TokKind::ident && cur_.text == "substring") {
            op = CmpOp::substring;
        } else {
            error("expected a comparison operator");
            return std::nullopt;
        }
        if (aggregation_position && !op_allowed_in_aggregation(op)) {
            error("operator '" + std::string(op_symbol(op)) + "' is not allowed on aggregates");
            return std::nullopt;
        }
        advance();
        return op;
    }

    std::optional<AttributeValue> parse_literal() {
        switch (cur_.kind) {
            case TokKind::number: {
                bool rounded = false;
                auto dec = Decimal::parse_rounded(cur_.text, &rounded);
                if (!dec) {
                    error("number out of range");
                    return std::nullopt;
                }
                if (rounded) {
                    diagnostics.push_back({cur_.span,
                                           "number rounded to six fractional digits",
                                           Severity::warning});
                }
                advance();
                return AttributeValue::number(*dec);
            }
            case TokKind::date: {
                auto date = Date::parse(cur_.text);
                if (!date) {
                    error("invalid calendar date");
                    return std::nullopt;
                }
                advance();
                return AttributeValue::date(*date);
            }
            case TokKind::string: {
                AttributeValue v = AttributeValue::text(cur_.text);
                advance();
                return v;
            }
            default:
                error("expected a number, date or quoted string");
                return std::nullopt;
        }
    }

    template <typename Pred>
    std::optional<Pred> predicate() {
        if (cur_.kind != TokKind::ident) {
            error("expected an attribute name");
            return std::nullopt;
        }
        Pred pred;
        pred.attribute = cur_.text;
        advance();
        SourceSpan op_span = cur_.span;
        auto op = parse_op(false);
        if (!op) return std::nullopt;
        auto literal = parse_literal();
        if (!literal) return std::nullopt;
        if (!op_applies_to(*op, literal->kind())) {
            diagnostics.push_back({op_span,
                                   "operator '" + std::string(op_symbol(*op)) +
                                       "' does not apply to " +
                                       std::string(kind_name(literal->kind())) + " literals",
                                   Severity::error});
            return std::nullopt;
        }
        pred.op = *op;
        pred.value = *literal;
        return pred;
    }

    std::optional<AggregationPredicate> parse_aggregation() {
        AggregationPredicate pred;
        if (cur_.text == "avg") pred.aggregator = Aggregator::avg;
        else if (cur_.text == "sum") pred.aggregator = Aggregator::sum;
        else if (cur_.text == "min") pred.aggregator = Aggregator::min;
        else if (cur_.text == "max") pred.aggregator = Aggregator::max;
        else pred.aggregator = Aggregator::count;
        advance();
        if (cur_.kind != TokKind::lparen) {
            error("expected '(' after aggregator");
            return std::nullopt;
        }
        advance();
        if (cur_.kind != TokKind::ident) {
            error("expected an attribute name inside the aggregator");
            return std::nullopt;
        }
        pred.attribute = cur_.text;
        advance();
        if (cur_.kind != TokKind::rparen) {
            error("expected ')'");
            return std::nullopt;
        }
        advance();
        auto op = parse_op(true);
        if (!op) return std::nullopt;
        pred.op = *op;
        if (cur_.kind != TokKind::number) {
            error("aggregation threshold must be a number");
            return std::nullopt;
        }
        bool rounded = false;
        auto dec = Decimal::parse_rounded(cur_.text, &rounded);
        if (!dec) {
            error("number out of range");
            return std::nullopt;
        }
        if (rounded) {
            diagnostics.push_back(
                {cur_.span, "number rounded to six fractional digits", Severity::warning});
        }
        pred.value = *dec;
        advance();
        return pred;
    }

    std::optional<CompositeConstraint> parse_composite() {
        advance();  // "include"
        if (!eat_keyword("at") || !eat_keyword("least")) return std::nullopt;
        if (cur_.kind != TokKind::number) {
            error("expected the minimum user count");
            return std::nullopt;
        }
        auto count = Decimal::parse(cur_.text);
        if (!count || count->units() % Decimal::kScale != 0) {
            error("minimum user count must be an integer");
            return std::nullopt;
        }
        std::int64_t l = count->units() / Decimal::kScale;
        if (l < 1) {
            error("minimum user count must be >= 1");
            return std::nullopt;
        }
        if (l > 1'000'000) {
            error("minimum user count is unreasonably large");
            return std::nullopt;
        }
        advance();
        if (!eat_keyword("users") || !eat_keyword("with")) return std::nullopt;

        CompositeConstraint composite;
        composite.min_count = static_cast<int>(l);
        while (true) {
            if (at_aggregation()) {
                auto agg = parse_aggregation();
                if (!agg) return std::nullopt;
                composite.conjuncts.emplace_back(*agg);
            } else {
                auto pred = predicate<ValuePredicate>();
                if (!pred) return std::nullopt;
                composite.conjuncts.emplace_back(*pred);
            }
            if (cur_.kind == TokKind::ident && cur_.text == "and") {
                advance();
                continue;
            }
            break;
        }
        return composite;
    }

    Lexer lexer_;
    Token cur_;
    Token next_;
    bool failed_lex_ = false;
};

std::string render_literal(const AttributeValue& value) {
    switch (value.kind()) {
        case Kind::text: return "\"" + value.as_text() + "\"";
        case Kind::number: return value.as_number().str();
        case Kind::date: return value.as_date().str();
    }
    return {};
}

}  // namespace

Parsed<ItemPredicate> parse_item_predicate(std::string_view text) {
    Parser parser(text);
    Parsed<ItemPredicate> out;
    out.value = parser.item_predicate();
    out.diagnostics = std::move(parser.diagnostics);
    if (!out.ok() && out.first_error().empty()) {
        out.diagnostics.push_back({{1, 1, 0}, "malformed predicate", Severity::error});
    }
    return out;
}

Parsed<GroupConstraint> parse_group_constraint(std::string_view text) {
    Parser parser(text);
    Parsed<GroupConstraint> out;
    out.value = parser.group_constraint();
    out.diagnostics = std::move(parser.diagnostics);
    if (!out.ok() && out.first_error().empty()) {
        out.diagnostics.push_back({{1, 1, 0}, "malformed constraint", Severity::error});
    }
    return out;
}

std::string render(const ItemPredicate& pred) {
    return pred.attribute + " " + std::string(op_symbol(pred.op)) + " " +
           render_literal(pred.value);
}

std::string render(const ValuePredicate& pred) {
    return pred.attribute + " " + std::string(op_symbol(pred.op)) + " " +
           render_literal(pred.value);
}

std::string render(const AggregationPredicate& pred) {
    return std::string(aggregator_name(pred.aggregator)) + "(" + pred.attribute + ") " +
           std::string(op_symbol(pred.op)) + " " + pred.value.str();
}

std::string render(const CompositeConstraint& constraint) {
    std::string out = "include at least " + std::to_string(constraint.min_count) + " users with ";
    bool first = true;
    for (const auto& conjunct : constraint.conjuncts) {
        if (!first) out += " and ";
        first = false;
        if (const auto* v = std::get_if<ValuePredicate>(&conjunct)) {
            out += render(*v);
        } else {
            out += render(std::get<AggregationPredicate>(conjunct));
        }
    }
    return out;
}

std::string render(const GroupConstraint& constraint) {
    if (const auto* v = std::get_if<ValuePredicate>(&constraint)) return render(*v);
    if (const auto* a = std::get_if<AggregationPredicate>(&constraint)) return render(*a);
    return render(std::get<CompositeConstraint>(constraint));
}

}  // namespace groupform::dsl
