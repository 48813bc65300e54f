#pragma once

// Text formats: polynomial system files, root list documents, and the
// structured certification report.

#include "rurcert/arith.hpp"
#include "rurcert/certify.hpp"
#include "rurcert/deflate.hpp"
#include "rurcert/multipoly.hpp"
#include "rurcert/system.hpp"

#include <json.hpp>

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rurcert {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, std::size_t col, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + what_),
          line(line), column(col) {}
    std::size_t line, column;
};

namespace detail {

struct Token {
    enum Kind { Number, Name, Plus, Minus, Star, Caret, LParen, RParen, End } kind;
    Rational value;      // Number
    std::string text;    // Name
    std::size_t col = 0;
};

inline std::vector<Token> lex_line(const std::string& s, std::size_t lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char ch = s[i];
        std::size_t col = i + 1;
        if (std::isspace(static_cast<unsigned char>(ch))) { ++i; continue; }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            Int num = int_from_string(s.substr(i, j - i));
            Int den(1);
            if (j < s.size() && s[j] == '/') {
                std::size_t k = j + 1;
                std::size_t d0 = k;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == d0) throw ParseError(lineno, k + 1, "expected denominator digits");
                den = int_from_string(s.substr(d0, k - d0));
                if (den == 0) throw ParseError(lineno, d0 + 1, "zero denominator");
                j = k;
            }
            Token t{Token::Number, Rational(num, den), "", col};
            t.value.canonicalize();
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back(Token{Token::Name, Rational(0), s.substr(i, j - i), col});
            i = j;
            continue;
        }
        Token::Kind k;
        switch (ch) {
            case '+': k = Token::Plus; break;
            case '-': k = Token::Minus; break;
            case '*': k = Token::Star; break;
            case '^': k = Token::Caret; break;
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            default:
                throw ParseError(lineno, col, std::string("unexpected character '") + ch + "'");
        }
        out.push_back(Token{k, Rational(0), "", col});
        ++i;
    }
    out.push_back(Token{Token::End, Rational(0), "", s.size() + 1});
    return out;
}

// expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
// factor := base ('^' uint)? ; base := number | name | '(' expr ')' | '-' base
class PolyParser {
  public:
    PolyParser(std::vector<Token> toks, const std::vector<std::string>& vars, std::size_t lineno)
        : toks_(std::move(toks)), vars_(vars), lineno_(lineno) {}

    MultiPoly parse() {
        MultiPoly p = expr();
        if (cur().kind != Token::End)
            throw ParseError(lineno_, cur().col, "trailing input");
        return p;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }

    MultiPoly expr() {
        bool neg = false;
        if (cur().kind == Token::Minus) { neg = true; advance(); }
        else if (cur().kind == Token::Plus) advance();
        MultiPoly acc = term();
        if (neg) acc = -acc;
        while (cur().kind == Token::Plus || cur().kind == Token::Minus) {
            bool minus = cur().kind == Token::Minus;
            advance();
            MultiPoly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    MultiPoly term() {
        MultiPoly acc = factor();
        while (cur().kind == Token::Star) {
            advance();
            acc = acc * factor();
        }
        return acc;
    }

    MultiPoly factor() {
        MultiPoly b = base();
        if (cur().kind == Token::Caret) {
            advance();
            if (cur().kind != Token::Number || cur().value.get_den() != 1 || cur().value < 0)
                throw ParseError(lineno_, cur().col, "exponent must be a nonnegative integer");
            unsigned long e = mpz_get_ui(cur().value.get_num().get_mpz_t());
            advance();
            MultiPoly acc = MultiPoly::constant(vars_.size(), Rational(1));
            for (unsigned long i = 0; i < e; ++i) acc = acc * b;
            return acc;
        }
        return b;
    }

    MultiPoly base() {
        const Token& t = cur();
        switch (t.kind) {
            case Token::Number: {
                MultiPoly p = MultiPoly::constant(vars_.size(), t.value);
                advance();
                return p;
            }
            case Token::Name: {
                for (std::size_t i = 0; i < vars_.size(); ++i)
                    if (vars_[i] == t.text) {
                        advance();
                        return MultiPoly::variable(vars_.size(), i);
                    }
                throw ParseError(lineno_, t.col, "unknown variable '" + t.text + "'");
            }
            case Token::Minus: {
                advance();
                return -base();
            }
            case Token::LParen: {
                advance();
                MultiPoly p = expr();
                if (cur().kind != Token::RParen)
                    throw ParseError(lineno_, cur().col, "expected ')'");
                advance();
                return p;
            }
            default:
                throw ParseError(lineno_, t.col, "expected a number, variable, or '('");
        }
    }

    std::vector<Token> toks_;
    const std::vector<std::string>& vars_;
    std::size_t lineno_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// System file: first non-empty line "vars: <name>+", then one polynomial per
// non-empty line.  Lines starting with '#' are comments.
inline PolySystem parse_system(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    PolySystem sys;
    bool have_vars = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        if (!have_vars) {
            if (line.compare(first, 5, "vars:") != 0)
                throw ParseError(lineno, first + 1, "expected 'vars:' header");
            std::istringstream vs(line.substr(first + 5));
            std::string name;
            while (vs >> name) {
                if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
                    throw ParseError(lineno, 1, "invalid variable name '" + name + "'");
                for (const auto& v : sys.variables)
                    if (v == name)
                        throw ParseError(lineno, 1, "duplicate variable '" + name + "'");
                sys.variables.push_back(name);
            }
            if (sys.variables.empty())
                throw ParseError(lineno, first + 1, "no variables declared");
            have_vars = true;
            continue;
        }
        detail::PolyParser pp(detail::lex_line(line, lineno), sys.variables, lineno);
        sys.polynomials.push_back(pp.parse());
    }
    if (!have_vars) throw ParseError(1, 1, "empty system file");
    if (sys.polynomials.empty()) throw ParseError(lineno, 1, "no polynomials");
    return sys;
}

inline std::string print_system(const PolySystem& sys) {
    std::string out = "vars:";
    for (const auto& v : sys.variables) out += " " + v;
    out += "\n";
    for (const auto& p : sys.polynomials) out += poly_text(p, sys.variables) + "\n";
    return out;
}

// Root document: { "epsilon": "<decimal>", "points": [ [ ["re","im"], ... ], ... ] }
// with values as decimal strings.
inline ApproxRootSet parse_roots(const std::string& text,
                                 unsigned precision_bits = kDefaultPrecisionBits) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("root file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("epsilon") || !j.contains("points"))
        throw std::runtime_error("root file: need object with 'epsilon' and 'points'");
    ApproxRootSet out;
    out.epsilon = rational_from_decimal(j.at("epsilon").get<std::string>());
    if (out.epsilon <= 0) throw std::runtime_error("root file: epsilon must be positive");
    std::size_t n = 0;
    for (const auto& pt : j.at("points")) {
        CVector z;
        std::vector<GaussRational> ez;
        for (const auto& coord : pt) {
            if (!coord.is_array() || coord.size() != 2)
                throw std::runtime_error("root file: coordinate must be [re, im]");
            Rational re = rational_from_decimal(coord.at(0).get<std::string>());
            Rational im = rational_from_decimal(coord.at(1).get<std::string>());
            ez.push_back(GaussRational{re, im});
            z.push_back(CFloat(BigFloat(re, precision_bits), BigFloat(im, precision_bits)));
        }
        out.exact_points.push_back(std::move(ez));
        if (n == 0) n = z.size();
        else if (z.size() != n)
            throw std::runtime_error("root file: points have inconsistent dimension");
        if (z.empty()) throw std::runtime_error("root file: empty point");
        out.points.push_back(std::move(z));
    }
    if (out.points.empty()) throw std::runtime_error("root file: no points");
    out.source = "file";
    return out;
}

// ---------------------------------------------------------------------------
// JSON serialization of results

inline std::string rational_text(const Rational& r) {
    return r.get_str();
}

inline nlohmann::json rur_json(const ExactRur& rur) {
    nlohmann::json j;
    auto coeffs = [](const UniPoly<Rational>& p) {
        nlohmann::json a = nlohmann::json::array();
        for (int i = 0; i <= p.degree(); ++i) a.push_back(rational_text(p.coeff(i)));
        return a;
    };
    j["lambda"] = nlohmann::json::array();
    for (const auto& l : rur.lambda) j["lambda"].push_back(rational_text(l));
    j["q"] = coeffs(rur.q);
    j["q_text"] = poly_text(rur.q);
    j["v"] = nlohmann::json::array();
    j["v_text"] = nlohmann::json::array();
    for (const auto& vi : rur.v) {
        j["v"].push_back(coeffs(vi));
        j["v_text"].push_back(poly_text(vi));
    }
    return j;
}

inline nlohmann::json approx_rur_json(const ApproxRur& rur) {
    nlohmann::json j;
    auto coeffs = [](const UniPoly<GaussRational>& p) {
        nlohmann::json a = nlohmann::json::array();
        for (int i = 0; i <= p.degree(); ++i) {
            const GaussRational& c = p.coeff(i);
            a.push_back({rational_text(c.re), rational_text(c.im)});
        }
        return a;
    };
    j["lambda"] = nlohmann::json::array();
    for (const auto& l : rur.lambda.lambda) j["lambda"].push_back(rational_text(l));
    j["q"] = coeffs(rur.q);
    j["v"] = nlohmann::json::array();
    for (const auto& vi : rur.v) j["v"].push_back(coeffs(vi));
    return j;
}

inline const char* outcome_name(CertificateReport::Outcome o) {
    switch (o) {
        case CertificateReport::Outcome::Certified: return "certified";
        case CertificateReport::Outcome::RefutedByHeightBound: return "refuted-by-height-bound";
        case CertificateReport::Outcome::Inconclusive: return "inconclusive";
        case CertificateReport::Outcome::NotAComponent: return "not-a-component";
    }
    return "unknown";
}

inline nlohmann::json report_json(const CertificateReport& rep, const PipelineOptions& opt) {
    nlohmann::json j;
    j["outcome"] = outcome_name(rep.outcome);
    j["seed"] = opt.seed;
    j["precision_bits"] = opt.precision_bits;
    j["method"] = opt.method == PipelineOptions::Method::Global ? "global" : "local";
    j["iterations"] = rep.iterations;
    j["B_history"] = nlohmann::json::array();
    for (const auto& b : rep.B_history) j["B_history"].push_back(b.get_str());
    j["E_history"] = nlohmann::json::array();
    for (const auto& e : rep.E_history) j["E_history"].push_back(rational_text(e));
    j["lambda"] = nlohmann::json::array();
    for (const auto& l : rep.lambda) j["lambda"].push_back(rational_text(l));
    j["candidate_residuals"] = nlohmann::json::array();
    for (const auto& r : rep.candidate_residuals) j["candidate_residuals"].push_back(r);
    j["selected_count"] = rep.selected_count;
    j["budget"] = {
        {"n", rep.budget.n},          {"m", rep.budget.m},
        {"D", rep.budget.D},          {"h", rep.budget.h},
        {"delta", rep.budget.delta},  {"h_prime", rep.budget.h_prime},
        {"log_Hbound", rep.budget.log_Hbound},
        {"log_Hbound2", rep.budget.log_Hbound2},
    };
    if (rep.certified_rur) {
        j["rur"] = rur_json(*rep.certified_rur);
        if (rep.output_height) {
            j["output_height"] = rep.output_height->height.get_str();
            j["output_log_height"] = rep.output_height->log_height;
        }
    }
    j["rur_trace"] = rep.rur_trace;
    if (rep.outcome == CertificateReport::Outcome::NotAComponent)
        j["witness_index"] = rep.witness_index;
    if (!rep.final_remainders.empty()) j["final_remainders"] = rep.final_remainders;
    j["notes"] = rep.notes;
    j["seconds"] = rep.seconds;
    return j;
}

inline nlohmann::json deflation_json(const DeflationRecord& rec,
                                     const std::vector<std::string>& vars) {
    nlohmann::json j;
    j["sequence"] = rec.sequence;
    switch (rec.status) {
        case DeflationRecord::Status::Regularized: j["status"] = "regularized"; break;
        case DeflationRecord::Status::PositiveIsosingularDimension:
            j["status"] = "positive-isosingular-dimension";
            break;
        case DeflationRecord::Status::IterationCap: j["status"] = "iteration-cap"; break;
    }
    j["heuristic_stabilization"] = rec.heuristic_stabilization;
    j["iterations"] = nlohmann::json::array();
    for (const auto& it : rec.iterations) {
        nlohmann::json e;
        e["d"] = it.d;
        e["full_minor_count"] = it.ell;
        e["reduced_minor_count"] = it.c;
        e["block_rows"] = it.block_rows;
        e["block_cols"] = it.block_cols;
        e["appended"] = nlohmann::json::array();
        for (const auto& p : it.appended) e["appended"].push_back(poly_text(p, vars));
        j["iterations"].push_back(std::move(e));
    }
    j["final_system"] = print_system(rec.final_system);
    return j;
}

}  // namespace rurcert
