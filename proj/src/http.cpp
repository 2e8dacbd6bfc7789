#include "brew/http.hpp"

#include <algorithm>
#include <cctype>
#include <exception>

namespace brew::http {

std::string_view to_string(Method m) { return m == Method::Get ? "GET" : "POST"; }

std::optional<Method> parse_method(std::string_view s)
{
    if (s == "GET") return Method::Get;
    if (s == "POST") return Method::Post;
    return std::nullopt;
}

std::optional<std::string> ParamList::get(std::string_view key) const
{
    for (const auto& [k, v] : items_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string ParamList::get_or(std::string_view key, std::string fallback) const
{
    auto v = get(key);
    return v ? *v : std::move(fallback);
}

bool CaseInsensitiveLess::operator()(std::string_view a, std::string_view b) const
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) < std::tolower(static_cast<unsigned char>(y));
    });
}

namespace {

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string url_decode(std::string_view s, bool plus_as_space)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '%' && i + 2 < s.size()) {
            int hi = hex_value(s[i + 1]);
            int lo = hex_value(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(plus_as_space && c == '+' ? ' ' : c);
    }
    return out;
}

std::string url_encode(std::string_view s)
{
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

ParamList parse_urlencoded(std::string_view s)
{
    ParamList out;
    while (!s.empty()) {
        auto amp = s.find('&');
        auto pair = s.substr(0, amp);
        s = amp == std::string_view::npos ? std::string_view{} : s.substr(amp + 1);
        if (pair.empty()) continue;
        auto eq = pair.find('=');
        if (eq == std::string_view::npos) {
            out.add(url_decode(pair), "");
        } else {
            out.add(url_decode(pair.substr(0, eq)), url_decode(pair.substr(eq + 1)));
        }
    }
    return out;
}

std::map<std::string, std::string> parse_cookie_header(std::string_view s)
{
    std::map<std::string, std::string> out;
    while (!s.empty()) {
        auto semi = s.find(';');
        auto pair = trim(s.substr(0, semi));
        s = semi == std::string_view::npos ? std::string_view{} : s.substr(semi + 1);
        auto eq = pair.find('=');
        if (eq == std::string_view::npos || eq == 0) continue;
        auto name = std::string(trim(pair.substr(0, eq)));
        auto value = trim(pair.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        out.emplace(std::move(name), std::string(value));  // first occurrence wins
    }
    return out;
}

std::string html_escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

Request Request::make(Method method, std::string_view target, HeaderMap headers, std::string body)
{
    Request req;
    req.method = method;
    auto q = target.find('?');
    std::string path = url_decode(target.substr(0, q), false);
    if (path.empty() || path.front() != '/') path.insert(path.begin(), '/');
    req.path = std::move(path);
    if (q != std::string_view::npos) req.query_params = parse_urlencoded(target.substr(q + 1));

    if (auto it = headers.find("Cookie"); it != headers.end()) req.cookies = parse_cookie_header(it->second);
    if (method == Method::Post) {
        auto it = headers.find("Content-Type");
        if (it != headers.end() && it->second.starts_with("application/x-www-form-urlencoded")) {
            req.form_params = parse_urlencoded(body);
        }
    }
    req.headers = std::move(headers);
    req.body = std::move(body);
    return req;
}

std::optional<std::string> Request::header(std::string_view name) const
{
    auto it = headers.find(name);
    if (it == headers.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Request::cookie(std::string_view name) const
{
    auto it = cookies.find(std::string(name));
    if (it == cookies.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Request::param(std::string_view name) const
{
    if (method == Method::Post) {
        if (auto v = form_params.get(name)) return v;
    }
    return query_params.get(name);
}

Response Response::html(std::string body, int status)
{
    Response r;
    r.status = status;
    r.body = std::move(body);
    r.add_header("Content-Type", "text/html; charset=utf-8");
    return r;
}

Response Response::text(std::string body, int status)
{
    Response r;
    r.status = status;
    r.body = std::move(body);
    r.add_header("Content-Type", "text/plain; charset=utf-8");
    return r;
}

Response Response::redirect(std::string location)
{
    Response r;
    r.status = 302;
    r.add_header("Location", std::move(location));
    return r;
}

Response& Response::add_header(std::string name, std::string value)
{
    headers.emplace_back(std::move(name), std::move(value));
    return *this;
}

std::optional<std::string> Response::header(std::string_view name) const
{
    CaseInsensitiveLess less;
    for (const auto& [k, v] : headers) {
        if (!less(k, name) && !less(name, k)) return v;
    }
    return std::nullopt;
}

std::vector<std::string> Response::header_values(std::string_view name) const
{
    CaseInsensitiveLess less;
    std::vector<std::string> out;
    for (const auto& [k, v] : headers) {
        if (!less(k, name) && !less(name, k)) out.push_back(v);
    }
    return out;
}

ModelAndView& ModelAndView::add_object(std::string key, std::string value)
{
    escape[key] = Escape::Html;
    model[std::move(key)] = std::move(value);
    return *this;
}

ModelAndView& ModelAndView::add_raw(std::string key, std::string value)
{
    escape[key] = Escape::Raw;
    model[std::move(key)] = std::move(value);
    return *this;
}

void ViewRegistry::add(std::string name, std::string tmpl)
{
    if (templates_.contains(name)) throw ConfigError("duplicate template '" + name + "'");
    templates_.emplace(std::move(name), std::move(tmpl));
}

bool ViewRegistry::contains(std::string_view name) const { return templates_.find(name) != templates_.end(); }

const std::string& ViewRegistry::get(std::string_view name) const
{
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigError("unknown view '" + std::string(name) + "'");
    return it->second;
}

namespace {

struct Placeholder {
    std::size_t begin;
    std::size_t end;  // one past "}}"
    std::string key;
    std::optional<std::string> fallback;
};

std::vector<Placeholder> scan(const std::string& tmpl)
{
    std::vector<Placeholder> out;
    std::size_t pos = 0;
    while ((pos = tmpl.find("{{", pos)) != std::string::npos) {
        auto close = tmpl.find("}}", pos + 2);
        if (close == std::string::npos) break;
        std::string_view inner(tmpl.data() + pos + 2, close - pos - 2);
        Placeholder ph{pos, close + 2, {}, std::nullopt};
        if (auto bar = inner.find('|'); bar != std::string_view::npos) {
            ph.key = std::string(trim(inner.substr(0, bar)));
            ph.fallback = std::string(inner.substr(bar + 1));
        } else {
            ph.key = std::string(trim(inner));
        }
        out.push_back(std::move(ph));
        pos = close + 2;
    }
    return out;
}

}  // namespace

std::string ViewRegistry::render(std::string_view view_name, const std::map<std::string, std::string>& model,
                                 const std::map<std::string, Escape>& escape_policy) const
{
    const auto& tmpl = get(view_name);
    std::string out;
    out.reserve(tmpl.size());
    std::size_t last = 0;
    for (const auto& ph : scan(tmpl)) {
        out.append(tmpl, last, ph.begin - last);
        last = ph.end;
        auto it = model.find(ph.key);
        if (it == model.end()) {
            if (!ph.fallback) {
                throw RenderError("view '" + std::string(view_name) + "': no value for '" + ph.key + "'");
            }
            out += *ph.fallback;
            continue;
        }
        auto pol = escape_policy.find(ph.key);
        bool raw = pol != escape_policy.end() && pol->second == Escape::Raw;
        out += raw ? it->second : html_escape(it->second);
    }
    out.append(tmpl, last);
    return out;
}

std::vector<std::string> ViewRegistry::placeholders(std::string_view name) const
{
    std::vector<std::string> out;
    for (auto& ph : scan(get(name))) out.push_back(std::move(ph.key));
    return out;
}

void Router::add_handler(std::string handler_id, Handler fn)
{
    if (handlers_.contains(handler_id)) throw ConfigError("duplicate handler '" + handler_id + "'");
    handlers_.emplace(std::move(handler_id), std::move(fn));
}

void Router::register_route(std::string pattern, Method method, std::string handler_id)
{
    if (pattern.empty() || pattern.front() != '/') throw ConfigError("route pattern must start with '/': " + pattern);
    if (handlers_.find(handler_id) == handlers_.end()) {
        throw ConfigError("route " + pattern + " names unknown handler '" + handler_id + "'");
    }
    for (const auto& r : routes_) {
        if (r.pattern == pattern && r.method == method) {
            throw ConfigError("duplicate route " + std::string(to_string(method)) + " " + pattern);
        }
    }
    routes_.push_back({std::move(pattern), method, std::move(handler_id)});
}

bool Router::pattern_matches(std::string_view pattern, std::string_view path)
{
    if (pattern.ends_with("/*")) {
        auto prefix = pattern.substr(0, pattern.size() - 1);
        return path.size() > prefix.size() && path.starts_with(prefix);
    }
    return pattern == path;
}

std::optional<std::string> Router::match(Method method, std::string_view path) const
{
    // Literal routes take precedence over prefix routes.
    for (const auto& r : routes_) {
        if (r.method == method && r.pattern == path) return r.handler_id;
    }
    for (const auto& r : routes_) {
        if (r.method == method && pattern_matches(r.pattern, path)) return r.handler_id;
    }
    return std::nullopt;
}

Response Router::invoke(const std::string& handler_id, const Request& req) const
{
    auto it = handlers_.find(handler_id);
    if (it == handlers_.end()) throw ConfigError("unknown handler '" + handler_id + "'");
    return it->second(req);
}

const std::string kGenericErrorPage =
    "<!DOCTYPE html>\n<html><head><title>Error</title></head>\n"
    "<body><h1>Something went wrong</h1><p>The request could not be processed.</p></body></html>\n";

namespace {

const std::string kNotFoundPage =
    "<!DOCTYPE html>\n<html><head><title>Not Found</title></head>\n"
    "<body><h1>404 Not Found</h1></body></html>\n";

Response error_page(const ErrorPolicy& policy, const char* what)
{
    bool verbose = false;
    try {
        verbose = policy.verbose && policy.verbose();
    } catch (...) {
    }
    if (!verbose) return Response::html(kGenericErrorPage, 500);
    std::string body = "<!DOCTYPE html>\n<html><head><title>500 Internal Server Error</title></head>\n<body>"
                       "<h1>Internal Server Error</h1>\n<pre>";
    body += html_escape(what);
    body += "</pre>\n</body></html>\n";
    return Response::html(std::move(body), 500);
}

}  // namespace

Response dispatch(const Router& router, const Request& req, const ErrorPolicy& policy)
{
    auto id = router.match(req.method, req.path);
    if (!id) return Response::html(kNotFoundPage, 404);
    try {
        return router.invoke(*id, req);
    } catch (const std::exception& e) {
        return error_page(policy, e.what());
    } catch (...) {
        return error_page(policy, "unknown error");
    }
}

}  // namespace brew::http
