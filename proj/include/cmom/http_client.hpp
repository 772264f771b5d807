#pragma once

// Real transport on top of cpp-httplib, kept out of http.hpp so tests can use
// fake transports without pulling sockets in.

#include <memory>
#include <string>

#include "httplib.h"

#include "cmom/http.hpp"

namespace cmom {

namespace detail {

struct SplitUrl {
    std::string scheme_host_port; // e.g. "http://127.0.0.1:8080"
    std::string path;             // e.g. "/v1/chat/completions"
};

inline SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint '" + url + "' has no scheme");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace detail

inline HttpPostFn default_http_post() {
    return [](const std::string& url, const HttpHeaders& headers,
              const std::string& body) -> HttpResult {
        auto [base, path] = detail::split_url(url);
        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(120);
        httplib::Headers hl;
        for (const auto& [k, v] : headers) hl.emplace(k, v);
        auto res = client.Post(path, hl, body, "application/json");
        if (!res) {
            throw TransportError("POST " + url + " failed: " + httplib::to_string(res.error()), 0,
                                 true);
        }
        return {res->status, res->body};
    };
}

} // namespace cmom
