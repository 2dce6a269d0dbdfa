#include "attrlab/manifest.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "attrlab/errors.hpp"
#include "attrlab/storage.hpp"

namespace attrlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ValidationError("manifest line " + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// removes a # comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

json parse_scalar(const std::string& tok, std::size_t line) {
    if (tok.empty()) fail(line, "empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') fail(line, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
            if (tok[i] == '\\' && i + 2 < tok.size() &&
                (tok[i + 1] == '"' || tok[i + 1] == '\\')) {
                out += tok[i + 1];
                ++i;
            } else {
                out += tok[i];
            }
        }
        return json(out);
    }
    if (tok == "true") return json(true);
    if (tok == "false") return json(false);
    // number: integer when it parses exactly as one
    try {
        std::size_t pos = 0;
        const long long iv = std::stoll(tok, &pos);
        if (pos == tok.size()) return json(iv);
    } catch (...) {
    }
    try {
        std::size_t pos = 0;
        const double dv = std::stod(tok, &pos);
        if (pos == tok.size()) return json(dv);
    } catch (...) {
    }
    fail(line, "cannot parse value '" + tok + "'");
}

std::vector<std::string> split_array_items(const std::string& body,
                                           std::size_t line) {
    std::vector<std::string> items;
    std::string cur;
    bool quoted = false;
    for (char c : body) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            items.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    const std::string last = strip(cur);
    if (!last.empty()) items.push_back(last);
    for (const auto& it : items)
        if (it.empty()) fail(line, "empty array element");
    return items;
}

json parse_value(const std::string& tok, std::size_t line) {
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']') fail(line, "unterminated array");
        json arr = json::array();
        for (const auto& item :
             split_array_items(tok.substr(1, tok.size() - 2), line))
            arr.push_back(parse_scalar(item, line));
        return arr;
    }
    return parse_scalar(tok, line);
}

}  // namespace

nlohmann::json parse_manifest_text(const std::string& text) {
    json root = json::object();
    json* table = &root;
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const std::string line = strip(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated table header");
            const std::string name = strip(line.substr(1, line.size() - 2));
            if (name.empty()) fail(lineno, "empty table name");
            table = &root;
            std::size_t start = 0;
            while (start <= name.size()) {
                const std::size_t dot = name.find('.', start);
                const std::string part =
                    strip(name.substr(start, dot == std::string::npos
                                                 ? std::string::npos
                                                 : dot - start));
                if (!valid_key(part)) fail(lineno, "bad table name '" + part + "'");
                table = &(*table)[part];
                if (table->is_null()) *table = json::object();
                if (!table->is_object()) fail(lineno, "table collides with a value");
                if (dot == std::string::npos) break;
                start = dot + 1;
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        const std::string key = strip(line.substr(0, eq));
        if (!valid_key(key)) fail(lineno, "bad key '" + key + "'");
        const std::string val = strip(line.substr(eq + 1));
        if (table->contains(key)) fail(lineno, "duplicate key '" + key + "'");
        (*table)[key] = parse_value(val, lineno);
    }
    return root;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open manifest " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    Manifest m;
    m.root = parse_manifest_text(ss.str());
    m.hash = bytes_hash_hex(ss.str());
    m.path = path;
    return m;
}

}  // namespace attrlab
