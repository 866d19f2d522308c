#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace feedpipe {

using HeaderMap = std::map<std::string, std::string>;
using ParamMap = std::map<std::string, std::string>;

struct HttpResponse {
    int status = 0;
    std::string body;
    HeaderMap headers;  // names lowercased
    bool transport_error = false;
    std::string error_reason;  // set on transport failure

    std::optional<std::string> header(const std::string& lowercase_name) const;
    std::optional<std::string> content_type() const { return header("content-type"); }
};

/// Transport interface. Implementations follow redirects themselves and
/// report the final response; retries live above this layer.
class HttpClient {
public:
    virtual ~HttpClient() = default;
    virtual HttpResponse get(const std::string& url, const HeaderMap& headers = {},
                             const ParamMap& params = {}) = 0;
};

/// Waiting is injectable so retry tests run without real delays.
class Sleeper {
public:
    virtual ~Sleeper() = default;
    virtual void wait(std::chrono::milliseconds d) = 0;
};

class RealSleeper : public Sleeper {
public:
    void wait(std::chrono::milliseconds d) override;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::vector<std::chrono::milliseconds> waits{std::chrono::milliseconds(5000),
                                                 std::chrono::milliseconds(15000)};
};

/// Outcome of a GET with the retry contract applied:
///   2xx            -> ok (returned immediately)
///   4xx            -> client_error, no retry
///   5xx/transport  -> wait and retry, at most max_attempts requests total
/// Any other terminal status (a redirect that was not followed, 1xx) is
/// treated as non-retryable.
struct GetResult {
    enum class Outcome { ok, client_error, exhausted };
    Outcome outcome = Outcome::exhausted;
    std::optional<HttpResponse> response;  // present when any response arrived
    int attempts = 0;
    std::string failure_reason;  // empty on ok

    bool ok() const { return outcome == Outcome::ok; }
};

GetResult get_with_retry(HttpClient& client, const std::string& url, const HeaderMap& headers,
                         const ParamMap& params, const RetryPolicy& policy, Sleeper& sleeper);

struct HttpClientOptions {
    int timeout_secs = 20;
    std::string user_agent = "feedpipe/1.0";
};

/// cpp-httplib backed transport; follows up to 5 redirects.
std::unique_ptr<HttpClient> make_httplib_client(const HttpClientOptions& options);

}  // namespace feedpipe
