#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "mtsem/mtir.hpp"
#include "mtsem/values.hpp"

namespace mtsem {

/// Parse errors are malformed literals; type errors are well-formed values of
/// the wrong shape. The driver retries on either, but reports them apart.
class ResponseError : public std::runtime_error {
  public:
    enum class Kind { Parse, Type };

    ResponseError(Kind kind, std::string message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

namespace detail {

class ValueParser {
  public:
    explicit ValueParser(std::string_view text) : src_(text) {}

    RuntimeValue run() {
        skip_ws();
        RuntimeValue v = parse_value();
        skip_ws();
        if (pos_ != src_.size()) fail("trailing content after value");
        return v;
    }

  private:
    [[noreturn]] void fail(const std::string& message) {
        throw ResponseError(ResponseError::Kind::Parse,
                            message + " (offset " + std::to_string(pos_) + ")");
    }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool eat(char c) {
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    RuntimeValue parse_value() {
        skip_ws();
        if (at_end()) fail("unexpected end of input");
        char c = peek();
        if (c == '\'' || c == '"') return RuntimeValue::str(parse_string());
        if (c == '[') return parse_list();
        if (c == '{') return parse_dict();
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_word();
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string parse_string() {
        char quote = peek();
        ++pos_;
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string");
            char c = peek();
            if (c == quote) {
                ++pos_;
                return out;
            }
            if (c == '\\') {
                ++pos_;
                if (at_end()) fail("unterminated string");
                char esc = peek();
                switch (esc) {
                    case '\'': out += '\''; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    default: fail(std::string("invalid escape '\\") + esc + "'");
                }
                ++pos_;
            } else {
                out += c;
                ++pos_;
            }
        }
    }

    RuntimeValue parse_list() {
        expect('[');
        std::vector<RuntimeValue> items;
        skip_ws();
        if (eat(']')) return RuntimeValue::list(std::move(items));
        while (true) {
            items.push_back(parse_value());
            skip_ws();
            if (eat(']')) return RuntimeValue::list(std::move(items));
            expect(',');
        }
    }

    RuntimeValue parse_dict() {
        expect('{');
        DictValue dict;
        skip_ws();
        if (eat('}')) return RuntimeValue::dict(std::move(dict));
        while (true) {
            skip_ws();
            if (at_end() || (peek() != '\'' && peek() != '"')) fail("expected dict key string");
            std::string key = parse_string();
            skip_ws();
            expect(':');
            dict.entries.emplace_back(key, parse_value());
            skip_ws();
            if (eat('}')) return RuntimeValue::dict(std::move(dict));
            expect(',');
        }
    }

    RuntimeValue parse_number() {
        std::size_t begin = pos_;
        if (peek() == '-') ++pos_;
        bool is_float = false;
        while (!at_end()) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-') {
                // '+'/'-' are only valid inside an exponent; stod rejects the rest
                if (c == '+' || c == '-') {
                    char prev = src_[pos_ - 1];
                    if (prev != 'e' && prev != 'E') break;
                }
                if (c == '.' || c == 'e' || c == 'E') is_float = true;
                ++pos_;
            } else {
                break;
            }
        }
        std::string_view text = src_.substr(begin, pos_ - begin);
        if (text.empty() || text == "-") fail("malformed number");
        if (!is_float) {
            long long i = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), i);
            if (res.ec == std::errc() && res.ptr == text.data() + text.size())
                return RuntimeValue::integer(i);
            // falls through for integers beyond 64 bits
        }
        double d = 0.0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), d);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            fail("malformed number");
        return RuntimeValue::real(d);
    }

    RuntimeValue parse_word() {
        std::size_t begin = pos_;
        while (!at_end() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            ++pos_;
        }
        std::string word(src_.substr(begin, pos_ - begin));
        if (word == "None") return RuntimeValue::none();
        if (word == "true") return RuntimeValue::boolean(true);
        if (word == "false") return RuntimeValue::boolean(false);

        skip_ws();
        if (eat('.')) {
            skip_ws();
            std::size_t vbegin = pos_;
            while (!at_end() &&
                   (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                ++pos_;
            }
            if (vbegin == pos_) fail("expected enum variant name after '.'");
            return RuntimeValue::enum_variant(word, std::string(src_.substr(vbegin, pos_ - vbegin)));
        }
        if (eat('(')) {
            ObjectValue obj;
            obj.class_name = word;
            skip_ws();
            if (eat(')')) return RuntimeValue::object(std::move(obj));
            while (true) {
                skip_ws();
                std::size_t fbegin = pos_;
                while (!at_end() &&
                       (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                    ++pos_;
                }
                if (fbegin == pos_) fail("expected field name");
                std::string field(src_.substr(fbegin, pos_ - fbegin));
                skip_ws();
                expect('=');
                obj.fields.emplace_back(field, parse_value());
                skip_ws();
                if (eat(')')) return RuntimeValue::object(std::move(obj));
                expect(',');
            }
        }
        fail("unexpected identifier '" + word + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

/// Removes surrounding code fences and a leading [Output] / <result> echo.
inline std::string strip_response_framing(std::string_view raw) {
    auto trim = [](std::string_view s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) return std::string_view();
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    };
    std::string_view s = trim(raw);
    auto first_line = [&]() {
        std::size_t nl = s.find('\n');
        return nl == std::string_view::npos ? s : trim(s.substr(0, nl));
    };
    auto drop_first_line = [&]() {
        std::size_t nl = s.find('\n');
        s = nl == std::string_view::npos ? std::string_view() : trim(s.substr(nl + 1));
    };
    if (first_line().substr(0, 3) == "```") {
        drop_first_line();
        std::size_t fence = s.rfind("```");
        if (fence != std::string_view::npos && trim(s.substr(fence)) == "```")
            s = trim(s.substr(0, fence));
    }
    while (first_line() == "[Output]" || first_line() == "<result>") drop_first_line();
    return std::string(s);
}

}  // namespace detail

/// Parses a raw model reply as a value literal of the render_value grammar
/// and checks it against the expected type from the call-site IR.
inline RuntimeValue parse_response(std::string_view raw,
                                   const TypeExpr& expected,
                                   const MtIrStar& ir) {
    std::string body = detail::strip_response_framing(raw);
    RuntimeValue parsed = detail::ValueParser(body).run();
    try {
        return type_check(parsed, expected, TypeCatalog::from_mtir(ir));
    } catch (const TypeCheckError& e) {
        throw ResponseError(ResponseError::Kind::Type, e.what());
    }
}

}  // namespace mtsem
