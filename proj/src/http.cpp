#include "http.hpp"

#include <thread>

#include <httplib.h>

#include "strings.hpp"
#include "url.hpp"

namespace feedpipe {

std::optional<std::string> HttpResponse::header(const std::string& lowercase_name) const {
    auto it = headers.find(lowercase_name);
    if (it == headers.end())
        return std::nullopt;
    return it->second;
}

void RealSleeper::wait(std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
}

GetResult get_with_retry(HttpClient& client, const std::string& url, const HeaderMap& headers,
                         const ParamMap& params, const RetryPolicy& policy, Sleeper& sleeper) {
    GetResult result;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        result.attempts = attempt;
        HttpResponse resp = client.get(url, headers, params);
        bool retryable;
        if (resp.transport_error) {
            result.failure_reason = "transport: " + resp.error_reason;
            retryable = true;
        } else {
            result.response = resp;
            if (resp.status >= 200 && resp.status < 300) {
                result.outcome = GetResult::Outcome::ok;
                result.failure_reason.clear();
                return result;
            }
            result.failure_reason = "HTTP " + std::to_string(resp.status);
            retryable = resp.status >= 500 && resp.status < 600;
        }
        if (!retryable) {
            result.outcome = GetResult::Outcome::client_error;
            return result;
        }
        if (attempt < policy.max_attempts) {
            size_t wait_index = std::min<size_t>(attempt - 1, policy.waits.size() - 1);
            if (!policy.waits.empty())
                sleeper.wait(policy.waits[wait_index]);
        }
    }
    result.outcome = GetResult::Outcome::exhausted;
    result.failure_reason += " after " + std::to_string(policy.max_attempts) + " attempts";
    return result;
}

namespace {

class HttplibClient : public HttpClient {
public:
    explicit HttplibClient(const HttpClientOptions& options) : options_(options) {}

    HttpResponse get(const std::string& url, const HeaderMap& headers,
                     const ParamMap& params) override {
        HttpResponse out;
        Url u = parse_url(url);
        if (!u.valid) {
            out.transport_error = true;
            out.error_reason = "invalid URL";
            return out;
        }
        std::string origin = u.scheme + "://" + u.host;
        if (u.port >= 0)
            origin += ":" + std::to_string(u.port);

        httplib::Client cli(origin);
        cli.set_follow_location(true);
        cli.set_connection_timeout(options_.timeout_secs, 0);
        cli.set_read_timeout(options_.timeout_secs, 0);
        cli.set_write_timeout(options_.timeout_secs, 0);
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
        cli.enable_server_certificate_verification(true);
#endif
        httplib::Headers h;
        h.emplace("User-Agent", options_.user_agent);
        for (const auto& [k, v] : headers)
            h.emplace(k, v);

        std::string path = u.path.empty() ? "/" : u.path;
        std::string query = u.query;
        for (const auto& [k, v] : params) {
            query += query.empty() ? "" : "&";
            query += httplib::detail::encode_query_param(k) + "=" +
                     httplib::detail::encode_query_param(v);
        }
        if (!query.empty())
            path += "?" + query;

        auto res = cli.Get(path, h);
        if (!res) {
            out.transport_error = true;
            out.error_reason = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        for (const auto& [k, v] : res->headers)
            out.headers[to_lower(k)] = v;
        return out;
    }

private:
    HttpClientOptions options_;
};

}  // namespace

std::unique_ptr<HttpClient> make_httplib_client(const HttpClientOptions& options) {
    return std::make_unique<HttplibClient>(options);
}

}  // namespace feedpipe
