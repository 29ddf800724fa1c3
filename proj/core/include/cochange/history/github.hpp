#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "cochange/common/error.hpp"
#include "cochange/history/change_set.hpp"

namespace cochange::history {

/// Network failure or an unexpected HTTP status.
class HttpError : public Error {
public:
    HttpError(const std::string& endpoint, int status, const std::string& detail)
        : Error(endpoint + ": HTTP " + std::to_string(status) + (detail.empty() ? "" : " " + detail)),
          endpoint_(endpoint),
          status_(status) {}

    [[nodiscard]] const std::string& endpoint() const noexcept { return endpoint_; }
    [[nodiscard]] int status() const noexcept { return status_; }

private:
    std::string endpoint_;
    int status_;
};

class AuthError : public HttpError {
public:
    using HttpError::HttpError;
};

class RepositoryNotFound : public HttpError {
public:
    using HttpError::HttpError;
};

class RateLimitExhausted : public HttpError {
public:
    using HttpError::HttpError;
};

struct HttpResponse {
    int status = 0;  // 0 when no response was received
    std::string body;
    std::map<std::string, std::string> headers;  // lowercased names
};

/// GET against a REST host. `target` is path plus query string.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& target, const std::map<std::string, std::string>& headers) = 0;
};

/// Transport backed by cpp-httplib. base_url like "https://api.github.com".
std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url,
                                                   std::chrono::seconds timeout = std::chrono::seconds{30});

struct GitHubClientOptions {
    int max_retries = 5;
    std::chrono::milliseconds initial_backoff{1000};
    /// Replaced in tests to avoid real sleeping.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// Fetches every merged pull request that targets the default branch and
/// the commits of each. Entries are "PR-<number>", sorted by number.
/// Rate-limit responses (429, or 403 with no remaining quota) are retried
/// with exponential backoff, honouring Retry-After.
PullRequestMapping fetch_pull_request_mapping(HttpTransport& transport, const std::string& owner,
                                              const std::string& name, const std::string& token,
                                              const GitHubClientOptions& options = {});

}  // namespace cochange::history
