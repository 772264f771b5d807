#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cmom/errors.hpp"

namespace cmom::xml {

// Well-known prefixes bound by default so that document fragments (an
// owl:Class element without surrounding xmlns declarations) still resolve.
inline const std::map<std::string, std::string>& default_prefixes() {
    static const std::map<std::string, std::string> table = {
        {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
        {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
        {"owl", "http://www.w3.org/2002/07/owl#"},
        {"oboInOwl", "http://www.geneontology.org/formats/oboInOwl#"},
        {"obo", "http://purl.obolibrary.org/obo/"},
        {"xsd", "http://www.w3.org/2001/XMLSchema#"},
        {"xml", "http://www.w3.org/XML/1998/namespace"},
    };
    return table;
}

struct Attribute {
    std::string name;   // as written, possibly prefixed
    std::string ns_uri; // resolved namespace URI; empty for unprefixed attributes
    std::string local;  // part after ':'
    std::string value;
};

struct Element {
    std::string name;   // as written
    std::string ns_uri; // resolved namespace URI (default xmlns applies)
    std::string local;
    std::vector<Attribute> attributes;
    std::vector<Element> children;
    std::string text; // concatenated character data, entity-decoded
    int line = 0;

    [[nodiscard]] const std::string* attr(std::string_view ns, std::string_view local_name) const {
        for (const auto& a : attributes) {
            if (a.ns_uri == ns && a.local == local_name) return &a.value;
        }
        return nullptr;
    }

    [[nodiscard]] bool is(std::string_view ns, std::string_view local_name) const {
        return ns_uri == ns && local == local_name;
    }
};

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Element parse_document() {
        skip_bom();
        skip_misc();
        if (eof()) throw ParseError("empty document", line_);
        Element root = parse_element(default_prefixes());
        skip_misc();
        if (!eof()) throw ParseError("content after document element", line_);
        return root;
    }

  private:
    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;

    [[nodiscard]] bool eof() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    [[nodiscard]] bool starts_with(std::string_view s) const {
        return text_.compare(pos_, s.size(), s) == 0;
    }

    void expect(std::string_view s) {
        if (!starts_with(s)) throw ParseError("expected '" + std::string(s) + "'", line_);
        for (size_t i = 0; i < s.size(); ++i) advance();
    }

    void skip_bom() {
        if (starts_with("\xEF\xBB\xBF")) pos_ += 3;
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

    void skip_ws() {
        while (!eof() && is_space(peek())) advance();
    }

    static bool is_name_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
               static_cast<unsigned char>(c) >= 0x80;
    }
    static bool is_name_char(char c) {
        return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
    }

    std::string parse_name() {
        if (eof() || !is_name_start(peek())) throw ParseError("expected a name", line_);
        std::string out;
        while (!eof() && is_name_char(peek())) out.push_back(advance());
        return out;
    }

    // Prolog, comments, PIs, doctype between elements.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<!DOCTYPE")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_until(std::string_view end) {
        while (!eof() && !starts_with(end)) advance();
        if (eof()) throw ParseError("unterminated '" + std::string(end) + "' section", line_);
        expect(end);
    }

    void skip_comment() {
        expect("<!--");
        while (!eof() && !starts_with("-->")) advance();
        if (eof()) throw ParseError("unterminated comment", line_);
        expect("-->");
    }

    void skip_doctype() {
        expect("<!DOCTYPE");
        int brackets = 0;
        while (!eof()) {
            char c = advance();
            if (c == '[') ++brackets;
            else if (c == ']') --brackets;
            else if (c == '>' && brackets == 0) return;
        }
        throw ParseError("unterminated DOCTYPE", line_);
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            size_t semi = raw.find(';', i);
            if (semi == std::string_view::npos) throw ParseError("unterminated entity", line_);
            std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out.push_back('&');
            else if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (!ent.empty() && ent[0] == '#') {
                long code = 0;
                try {
                    code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                               ? std::stol(std::string(ent.substr(2)), nullptr, 16)
                               : std::stol(std::string(ent.substr(1)), nullptr, 10);
                } catch (const std::exception&) {
                    throw ParseError("bad character reference '&" + std::string(ent) + ";'", line_);
                }
                append_utf8(out, code);
            } else {
                throw ParseError("unknown entity '&" + std::string(ent) + ";'", line_);
            }
            i = semi;
        }
        return out;
    }

    static void append_utf8(std::string& out, long code) {
        if (code < 0x80) {
            out.push_back(static_cast<char>(code));
        } else if (code < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (code >> 18)));
            out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
    }

    std::string parse_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) {
            throw ParseError("expected quoted attribute value", line_);
        }
        char quote = advance();
        std::string raw;
        while (!eof() && peek() != quote) {
            if (peek() == '<') throw ParseError("'<' in attribute value", line_);
            raw.push_back(advance());
        }
        if (eof()) throw ParseError("unterminated attribute value", line_);
        advance(); // closing quote
        return decode_entities(raw);
    }

    static void split_qname(const std::string& qname, std::string& prefix, std::string& local) {
        size_t colon = qname.find(':');
        if (colon == std::string::npos) {
            prefix.clear();
            local = qname;
        } else {
            prefix = qname.substr(0, colon);
            local = qname.substr(colon + 1);
        }
    }

    Element parse_element(const std::map<std::string, std::string>& outer_scope) {
        expect("<");
        Element el;
        el.line = line_;
        el.name = parse_name();

        std::map<std::string, std::string> scope = outer_scope;
        std::vector<std::pair<std::string, std::string>> raw_attrs;
        for (;;) {
            skip_ws();
            if (eof()) throw ParseError("unterminated start tag", line_);
            if (peek() == '>' || starts_with("/>")) break;
            std::string name = parse_name();
            skip_ws();
            expect("=");
            skip_ws();
            std::string value = parse_attr_value();
            for (const auto& [n, v] : raw_attrs) {
                if (n == name) throw ParseError("duplicate attribute '" + name + "'", line_);
            }
            if (name == "xmlns") {
                scope[""] = value;
            } else if (name.rfind("xmlns:", 0) == 0) {
                scope[name.substr(6)] = value;
            }
            raw_attrs.emplace_back(std::move(name), std::move(value));
        }

        resolve_names(el, raw_attrs, scope);

        if (starts_with("/>")) {
            expect("/>");
            return el;
        }
        expect(">");

        // Content: children and character data until the matching end tag.
        std::string raw_text;
        for (;;) {
            if (eof()) throw ParseError("unterminated element <" + el.name + ">", line_);
            if (starts_with("</")) {
                expect("</");
                std::string closing = parse_name();
                if (closing != el.name) {
                    throw ParseError("mismatched end tag </" + closing + "> for <" + el.name + ">",
                                     line_);
                }
                skip_ws();
                expect(">");
                break;
            }
            if (starts_with("<!--")) {
                skip_comment();
            } else if (starts_with("<![CDATA[")) {
                expect("<![CDATA[");
                while (!eof() && !starts_with("]]>")) raw_text.push_back(advance());
                if (eof()) throw ParseError("unterminated CDATA section", line_);
                expect("]]>");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (peek() == '<') {
                el.children.push_back(parse_element(scope));
            } else {
                std::string run;
                while (!eof() && peek() != '<') run.push_back(advance());
                raw_text += decode_entities(run);
            }
        }
        el.text = trim(raw_text);
        return el;
    }

    void resolve_names(Element& el, const std::vector<std::pair<std::string, std::string>>& raw_attrs,
                       const std::map<std::string, std::string>& scope) {
        std::string prefix;
        split_qname(el.name, prefix, el.local);
        el.ns_uri = lookup(prefix, scope, /*is_element=*/true);

        for (const auto& [name, value] : raw_attrs) {
            if (name == "xmlns" || name.rfind("xmlns:", 0) == 0) continue;
            Attribute a;
            a.name = name;
            a.value = value;
            std::string ap;
            split_qname(name, ap, a.local);
            a.ns_uri = ap.empty() ? std::string() : lookup(ap, scope, /*is_element=*/false);
            el.attributes.push_back(std::move(a));
        }
    }

    std::string lookup(const std::string& prefix, const std::map<std::string, std::string>& scope,
                       bool is_element) {
        auto it = scope.find(prefix);
        if (it != scope.end()) return it->second;
        if (prefix.empty()) return is_element ? std::string() : std::string();
        auto dflt = default_prefixes().find(prefix);
        if (dflt != default_prefixes().end()) return dflt->second;
        throw ParseError("unbound namespace prefix '" + prefix + "'", line_);
    }

    static std::string trim(const std::string& s) {
        size_t b = 0, e = s.size();
        while (b < e && is_space(s[b])) ++b;
        while (e > b && is_space(s[e - 1])) --e;
        return s.substr(b, e - b);
    }
};

} // namespace detail

/// Parses one XML document (or element fragment) into a DOM tree.
/// Throws ParseError with line information on malformed input.
inline Element parse(std::string_view document) {
    return detail::Parser(document).parse_document();
}

/// Escapes text for use in attribute values and character data.
inline std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace cmom::xml
