#include "cochange/history/github.hpp"

#include <algorithm>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace cochange::history {

using nlohmann::json;

namespace {

class HttplibTransport final : public HttpTransport {
public:
    HttplibTransport(const std::string& base_url, std::chrono::seconds timeout) : client_(base_url) {
        client_.set_connection_timeout(timeout);
        client_.set_read_timeout(timeout);
        client_.set_follow_location(true);
    }

    HttpResponse get(const std::string& target, const std::map<std::string, std::string>& headers) override {
        httplib::Headers h(headers.begin(), headers.end());
        auto result = client_.Get(target, h);
        HttpResponse response;
        if (!result) {
            response.body = httplib::to_string(result.error());
            return response;
        }
        response.status = result->status;
        response.body = result->body;
        for (const auto& [k, v] : result->headers) {
            std::string key = k;
            std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
            response.headers[key] = v;
        }
        return response;
    }

private:
    httplib::Client client_;
};

class Fetcher {
public:
    Fetcher(HttpTransport& transport, const std::string& token, const GitHubClientOptions& options)
        : transport_(transport), options_(options) {
        headers_["Accept"] = "application/vnd.github+json";
        headers_["User-Agent"] = "cochange";
        if (!token.empty()) headers_["Authorization"] = "Bearer " + token;
        if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }

    json get_json(const std::string& target) {
        auto backoff = options_.initial_backoff;
        for (int attempt = 0;; ++attempt) {
            HttpResponse r = transport_.get(target, headers_);
            if (r.status == 200) {
                try {
                    return json::parse(r.body);
                } catch (const json::exception& e) {
                    throw HttpError(target, r.status, std::string("malformed body: ") + e.what());
                }
            }
            if (r.status == 0) throw HttpError(target, 0, r.body);
            if (is_rate_limited(r)) {
                if (attempt >= options_.max_retries) {
                    throw RateLimitExhausted(target, r.status,
                                             "rate limit still exceeded after " +
                                                 std::to_string(options_.max_retries) + " retries");
                }
                options_.sleep(wait_for(r, backoff));
                backoff *= 2;
                continue;
            }
            if (r.status == 401 || r.status == 403) throw AuthError(target, r.status, "authentication failed");
            if (r.status == 404) throw RepositoryNotFound(target, r.status, "not found");
            throw HttpError(target, r.status, "");
        }
    }

private:
    static bool is_rate_limited(const HttpResponse& r) {
        if (r.status == 429) return true;
        if (r.status != 403) return false;
        auto it = r.headers.find("x-ratelimit-remaining");
        return it != r.headers.end() && it->second == "0";
    }

    static std::chrono::milliseconds wait_for(const HttpResponse& r, std::chrono::milliseconds backoff) {
        auto it = r.headers.find("retry-after");
        if (it != r.headers.end()) {
            try {
                return std::chrono::seconds{std::stoll(it->second)};
            } catch (const std::exception&) {
            }
        }
        return backoff;
    }

    HttpTransport& transport_;
    GitHubClientOptions options_;
    std::map<std::string, std::string> headers_;
};

template <typename Fn>
void paginate(Fetcher& fetcher, const std::string& target, Fn&& fn) {
    constexpr int kPerPage = 100;
    const char sep = target.find('?') == std::string::npos ? '?' : '&';
    for (int page = 1;; ++page) {
        const json body =
            fetcher.get_json(target + sep + "per_page=" + std::to_string(kPerPage) + "&page=" + std::to_string(page));
        if (!body.is_array()) throw HttpError(target, 200, "expected a JSON array");
        for (const auto& item : body) fn(item);
        if (body.size() < static_cast<std::size_t>(kPerPage)) return;
    }
}

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url, std::chrono::seconds timeout) {
    return std::make_unique<HttplibTransport>(base_url, timeout);
}

PullRequestMapping fetch_pull_request_mapping(HttpTransport& transport, const std::string& owner,
                                              const std::string& name, const std::string& token,
                                              const GitHubClientOptions& options) {
    Fetcher fetcher(transport, token, options);
    const std::string repo = "/repos/" + owner + "/" + name;

    const json info = fetcher.get_json(repo);
    const std::string branch = info.value("default_branch", "main");

    std::vector<long long> merged;
    paginate(fetcher, repo + "/pulls?state=closed&base=" + branch, [&](const json& pr) {
        if (pr.contains("merged_at") && !pr.at("merged_at").is_null()) merged.push_back(pr.at("number").get<long long>());
    });
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    PullRequestMapping mapping;
    for (long long number : merged) {
        MappingEntry entry{"PR-" + std::to_string(number), {}};
        paginate(fetcher, repo + "/pulls/" + std::to_string(number) + "/commits",
                 [&](const json& c) { entry.commits.push_back(c.at("sha").get<std::string>()); });
        if (!entry.commits.empty()) mapping.entries.push_back(std::move(entry));
    }
    return mapping;
}

}  // namespace cochange::history
