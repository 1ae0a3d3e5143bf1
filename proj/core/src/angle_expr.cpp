#include "bellsim/angle_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "bellsim/hv_space.hpp"

namespace bellsim {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    double run() {
        const double value = sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        if (!std::isfinite(value)) fail("result is not finite");
        return value;
    }

private:
    double sum() {
        double value = product();
        for (;;) {
            if (accept('+')) value += product();
            else if (accept('-')) value -= product();
            else return value;
        }
    }

    double product() {
        double value = unary();
        for (;;) {
            if (accept('*')) value *= unary();
            else if (accept('/')) value /= unary();
            else return value;
        }
    }

    double unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return implicit_product();
    }

    // "3pi/4" parses as (3 * pi) / 4.
    double implicit_product() {
        double value = primary();
        skip_space();
        while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(')) {
            value *= primary();
            skip_space();
        }
        return value;
    }

    double primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            const double value = sum();
            expect(')');
            return value;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return named();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    double number() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
        if (ec != std::errc()) fail("bad number");
        pos_ += static_cast<std::size_t>(end - begin);
        return value;
    }

    double named() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "pi") return kPi;
        expect('(');
        const double x = sum();
        expect(')');
        if (name == "sin") return std::sin(x);
        if (name == "cos") return std::cos(x);
        if (name == "tan") return std::tan(x);
        if (name == "asin" || name == "acos") {
            if (x < -1.0 || x > 1.0) fail(std::string(name) + " argument outside [-1, 1]");
            return name == "asin" ? std::asin(x) : std::acos(x);
        }
        if (name == "atan") return std::atan(x);
        if (name == "sqrt") {
            if (x < 0.0) fail("sqrt of a negative number");
            return std::sqrt(x);
        }
        if (name == "deg") return x * kPi / 180.0;
        fail("unknown function '" + std::string(name) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw AngleParseError("angle '" + std::string(text_) + "': " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

double parse_angle(std::string_view text) { return Parser(text).run(); }

}  // namespace bellsim
