#pragma once

// Minimal model-view-controller kernel: request/response types, route table
// with dispatch, and a double-brace template renderer.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace brew::http {

enum class Method { Get, Post };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

/// Ordered key/value list. Lookups return the first match.
class ParamList {
public:
    void add(std::string key, std::string value) { items_.emplace_back(std::move(key), std::move(value)); }
    std::optional<std::string> get(std::string_view key) const;
    std::string get_or(std::string_view key, std::string fallback = {}) const;
    bool contains(std::string_view key) const { return get(key).has_value(); }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

struct CaseInsensitiveLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const;
};

using HeaderMap = std::map<std::string, std::string, CaseInsensitiveLess>;

struct Request {
    Method method = Method::Get;
    std::string path = "/";
    ParamList query_params;
    ParamList form_params;
    HeaderMap headers;
    std::map<std::string, std::string> cookies;
    std::string body;

    /// Builds a request from a raw target ("/p?a=1") plus headers and body,
    /// applying the query/form/cookie parsing rules.
    static Request make(Method method, std::string_view target, HeaderMap headers = {}, std::string body = {});

    std::optional<std::string> header(std::string_view name) const;
    std::optional<std::string> cookie(std::string_view name) const;
    /// Form value for POST, otherwise query value.
    std::optional<std::string> param(std::string_view name) const;
};

struct Response {
    int status = 200;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;

    static Response html(std::string body, int status = 200);
    static Response text(std::string body, int status = 200);
    static Response redirect(std::string location);

    Response& add_header(std::string name, std::string value);
    std::optional<std::string> header(std::string_view name) const;
    std::vector<std::string> header_values(std::string_view name) const;
};

std::string url_decode(std::string_view s, bool plus_as_space = true);
std::string url_encode(std::string_view s);
ParamList parse_urlencoded(std::string_view s);
std::map<std::string, std::string> parse_cookie_header(std::string_view s);

/// Replaces the five HTML metacharacters < > & " ' with entities.
std::string html_escape(std::string_view s);

/// Thrown for broken application wiring: duplicate routes, unknown handlers,
/// missing templates. Raised at startup, never per request.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by render when a placeholder has neither a model value nor a default.
class RenderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Escape { Html, Raw };

struct ModelAndView {
    std::string view_name;
    std::map<std::string, std::string> model;
    std::map<std::string, Escape> escape;

    explicit ModelAndView(std::string view) : view_name(std::move(view)) {}

    /// Adds an html-escaped model value.
    ModelAndView& add_object(std::string key, std::string value);
    /// Adds a model value inserted verbatim.
    ModelAndView& add_raw(std::string key, std::string value);
};

/// Registered templates. Placeholders are "{{key}}" or "{{key|default}}".
class ViewRegistry {
public:
    void add(std::string name, std::string tmpl);
    bool contains(std::string_view name) const;
    const std::string& get(std::string_view name) const;

    /// Unspecified keys default to html-escape.
    std::string render(std::string_view view_name, const std::map<std::string, std::string>& model,
                       const std::map<std::string, Escape>& escape_policy = {}) const;
    std::string render(const ModelAndView& mv) const { return render(mv.view_name, mv.model, mv.escape); }

    /// Placeholder keys used by a template, without defaults.
    std::vector<std::string> placeholders(std::string_view name) const;

private:
    std::map<std::string, std::string, std::less<>> templates_;
};

using Handler = std::function<Response(const Request&)>;

struct RouteEntry {
    std::string pattern;
    Method method;
    std::string handler_id;
};

/// Route table. A pattern is matched literally against the request path,
/// except that a trailing "/*" matches any path below that prefix.
class Router {
public:
    void add_handler(std::string handler_id, Handler fn);
    void register_route(std::string pattern, Method method, std::string handler_id);

    /// Handler id for the request, or nullopt.
    std::optional<std::string> match(Method method, std::string_view path) const;
    Response invoke(const std::string& handler_id, const Request& req) const;
    const std::vector<RouteEntry>& routes() const { return routes_; }

private:
    static bool pattern_matches(std::string_view pattern, std::string_view path);

    std::map<std::string, Handler, std::less<>> handlers_;
    std::vector<RouteEntry> routes_;
};

/// Error page policy applied when a handler throws.
struct ErrorPolicy {
    std::function<bool()> verbose;
};

/// Body of the 500 page when verbose errors are off. Fixed bytes.
extern const std::string kGenericErrorPage;

/// Matches the request, invokes the handler and converts handler faults to
/// 500 pages. Never throws.
Response dispatch(const Router& router, const Request& req, const ErrorPolicy& policy);

}  // namespace brew::http
