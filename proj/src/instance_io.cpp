#include "splab/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace splab {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line), column_(column)
{
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Problem run()
    {
        while (true) {
            skip_blank_lines();
            if (eof())
                break;
            statement();
        }
        if (!objective_)
            fail("missing objective (expected 'min:' or 'max:')");
        if (constraints_.empty())
            fail("problem has no constraints");
        try {
            return Problem(names_, bounds_, std::move(*objective_), std::move(constraints_), family_);
        } catch (const ModelError& e) {
            fail(e.what());
        }
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    std::vector<std::string> names_;
    std::vector<Bounds> bounds_;
    std::map<std::string, VarIndex, std::less<>> index_;
    std::optional<Polynomial> objective_;
    std::vector<Constraint> constraints_;
    std::string family_;

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, col_, message); }
    [[noreturn]] void fail_at(std::size_t line, std::size_t col, const std::string& message) const
    {
        throw ParseError(line, col, message);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    // Skips spaces and comments but not statement terminators.
    void skip_inline()
    {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (!eof() && peek() != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    void skip_blank_lines()
    {
        while (true) {
            skip_inline();
            if (!eof() && (peek() == '\n' || peek() == ';'))
                advance();
            else
                break;
        }
    }

    bool at_statement_end()
    {
        skip_inline();
        return eof() || peek() == '\n' || peek() == ';';
    }

    void expect_statement_end()
    {
        if (!at_statement_end())
            fail(std::string("unexpected '") + peek() + "'");
        if (!eof())
            advance();
    }

    void expect(char c)
    {
        skip_inline();
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string name()
    {
        skip_inline();
        if (!is_name_start(peek()))
            fail("expected a name");
        const std::size_t start = pos_;
        while (!eof() && is_name_char(peek()))
            advance();
        return std::string(text_.substr(start, pos_ - start));
    }

    double number()
    {
        skip_inline();
        const std::size_t start = pos_;
        while (is_digit(peek()))
            advance();
        if (peek() == '.') {
            advance();
            while (is_digit(peek()))
                advance();
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
            fail("expected a number");
        if (peek() == 'e' || peek() == 'E') {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
                ++look;
            if (look < text_.size() && is_digit(text_[look])) {
                while (pos_ < look)
                    advance();
                while (is_digit(peek()))
                    advance();
            }
        }
        double value = 0.0;
        const auto first = text_.data() + start;
        const auto last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last)
            fail("malformed number");
        return value;
    }

    double signed_number()
    {
        skip_inline();
        double sign = 1.0;
        while (peek() == '-' || peek() == '+') {
            if (peek() == '-')
                sign = -sign;
            advance();
            skip_inline();
        }
        return sign * number();
    }

    void statement()
    {
        const std::size_t line = line_, col = col_;
        const std::string keyword = name();
        if (keyword == "var")
            declaration();
        else if (keyword == "min" || keyword == "max")
            objective(keyword == "max", line, col);
        else if (keyword == "st")
            constraint();
        else if (keyword == "family")
            family();
        else
            fail_at(line, col, "unknown statement '" + keyword + "'");
    }

    void declaration()
    {
        const std::size_t line = line_, col = col_;
        const std::string var = name();
        if (index_.count(var))
            fail_at(line, col, "variable '" + var + "' declared twice");
        if (name() != "in")
            fail("expected 'in'");
        expect('[');
        skip_inline();
        const std::size_t lo_line = line_, lo_col = col_;
        const double lo = signed_number();
        expect(',');
        const double hi = signed_number();
        expect(']');
        if (!std::isfinite(lo) || !std::isfinite(hi))
            fail_at(lo_line, lo_col, "bounds must be finite");
        if (lo < 0.0)
            fail_at(lo_line, lo_col, "negative lower bound for '" + var + "'");
        if (lo > hi)
            fail_at(lo_line, lo_col, "lower bound exceeds upper bound for '" + var + "'");
        expect_statement_end();
        index_.emplace(var, static_cast<VarIndex>(names_.size()));
        names_.push_back(var);
        bounds_.push_back({lo, hi});
    }

    void objective(bool maximize, std::size_t line, std::size_t col)
    {
        if (objective_)
            fail_at(line, col, "second objective");
        expect(':');
        Polynomial p = expression();
        expect_statement_end();
        objective_ = maximize ? p.scaled(-1.0) : std::move(p);
    }

    void constraint()
    {
        const std::size_t line = line_, col = col_;
        const std::string cname = name();
        for (const auto& c : constraints_)
            if (c.name == cname)
                fail_at(line, col, "constraint '" + cname + "' declared twice");
        expect(':');
        Polynomial body = expression();
        skip_inline();
        enum class Op { Ge, Le, Eq } op;
        if (peek() == '>') {
            advance();
            expect('=');
            op = Op::Ge;
        } else if (peek() == '<') {
            advance();
            expect('=');
            op = Op::Le;
        } else if (peek() == '=') {
            advance();
            if (peek() == '=')
                advance();
            op = Op::Eq;
        } else {
            fail("expected '>=', '<=' or '='");
        }
        double rhs = signed_number();
        expect_statement_end();

        rhs -= body.constant();
        body = body.with_constant(0.0);
        if (op == Op::Le) {
            body = body.scaled(-1.0);
            rhs = -rhs;
        }
        constraints_.push_back({cname, std::move(body),
                                op == Op::Eq ? Relation::Equal : Relation::GreaterEqual, rhs});
    }

    void family()
    {
        skip_inline();
        const std::size_t start = pos_;
        while (!eof() && peek() != '\n' && peek() != ';' && peek() != '#')
            advance();
        std::string label(text_.substr(start, pos_ - start));
        while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back())))
            label.pop_back();
        if (label.empty())
            fail("empty family label");
        family_ = std::move(label);
        expect_statement_end();
    }

    Polynomial expression()
    {
        PolynomialBuilder builder;
        skip_inline();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = peek() == '-' ? -1.0 : 1.0;
            advance();
        }
        term(builder, sign);
        while (true) {
            skip_inline();
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1.0 : 1.0;
                advance();
                term(builder, sign);
            } else {
                break;
            }
        }
        return builder.build();
    }

    bool starts_factor()
    {
        skip_inline();
        const char c = peek();
        return is_digit(c) || c == '.' || is_name_start(c);
    }

    void term(PolynomialBuilder& builder, double sign)
    {
        double coef = sign;
        std::vector<MultisetEntry> powers;
        if (!starts_factor())
            fail("expected a term");
        factor(coef, powers);
        while (true) {
            skip_inline();
            if (peek() == '*') {
                advance();
                if (!starts_factor())
                    fail("expected a factor after '*'");
                factor(coef, powers);
            } else if (starts_factor()) {
                factor(coef, powers);
            } else {
                break;
            }
        }
        builder.add(Multiset::from_entries(std::move(powers)), coef);
    }

    void factor(double& coef, std::vector<MultisetEntry>& powers)
    {
        skip_inline();
        if (!is_name_start(peek())) {
            coef *= number();
            return;
        }
        const std::size_t line = line_, col = col_;
        const std::string var = name();
        auto it = index_.find(var);
        if (it == index_.end())
            fail_at(line, col, "variable '" + var + "' used without declaration");
        std::uint32_t exponent = 1;
        skip_inline();
        if (peek() == '^') {
            advance();
            skip_inline();
            const std::size_t start = pos_;
            while (is_digit(peek()))
                advance();
            if (pos_ == start)
                fail("expected an integer exponent");
            const auto digits = text_.substr(start, pos_ - start);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
            if (ec != std::errc())
                fail("exponent out of range");
        }
        powers.push_back({it->second, exponent});
    }
};

void render_polynomial(std::ostringstream& out, const Polynomial& p, std::span<const std::string> names)
{
    bool first = true;
    for (const auto& t : p.terms()) {
        const double c = t.coefficient;
        if (first)
            out << (c < 0 ? "-" : "");
        else
            out << (c < 0 ? " - " : " + ");
        first = false;
        const double mag = std::abs(c);
        bool need_star = false;
        if (mag != 1.0) {
            out << format_double(mag);
            need_star = true;
        }
        for (const auto& e : t.support.entries()) {
            if (need_star)
                out << '*';
            out << names[e.var];
            if (e.mult > 1)
                out << '^' << e.mult;
            need_star = true;
        }
    }
    const double k = p.constant();
    if (k != 0.0 || first) {
        if (first)
            out << format_double(k);
        else
            out << (k < 0 ? " - " : " + ") << format_double(std::abs(k));
    }
}

} // namespace

Problem parse_problem(std::string_view text)
{
    return Parser(text).run();
}

Problem read_problem(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str());
}

std::string format_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string render_problem(const Problem& problem)
{
    std::ostringstream out;
    const auto names = problem.var_names();
    if (!problem.family().empty())
        out << "family " << problem.family() << '\n';
    for (std::size_t j = 0; j < problem.num_vars(); ++j) {
        const auto& b = problem.bounds()[j];
        out << "var " << names[j] << " in [" << format_double(b.lower) << ", " << format_double(b.upper)
            << "]\n";
    }
    out << "min: ";
    render_polynomial(out, problem.objective(), names);
    out << '\n';
    for (const auto& c : problem.constraints()) {
        out << "st " << c.name << ": ";
        render_polynomial(out, c.body, names);
        out << (c.relation == Relation::Equal ? " = " : " >= ") << format_double(c.rhs) << '\n';
    }
    return out.str();
}

void write_problem(const Problem& problem, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write instance file " + path.string());
    out << render_problem(problem);
}

} // namespace splab
