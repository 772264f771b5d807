#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cmom/errors.hpp"

namespace cmom {

namespace detail {

/// Counting semaphore capping concurrent in-flight requests.
class Semaphore {
  public:
    explicit Semaphore(int count) : count_(count) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return count_ > 0; });
        --count_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++count_;
        }
        cv_.notify_one();
    }

  private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int count_;
};

class SemaphoreGuard {
  public:
    explicit SemaphoreGuard(Semaphore& semaphore) : semaphore_(semaphore) { semaphore_.acquire(); }
    ~SemaphoreGuard() { semaphore_.release(); }
    SemaphoreGuard(const SemaphoreGuard&) = delete;
    SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

  private:
    Semaphore& semaphore_;
};

} // namespace detail

struct HttpResult {
    int status = 0;
    std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

/// Transport function: POSTs a JSON body, returns status + body, throws
/// TransportError on network-level failure. Injectable for tests.
using HttpPostFn =
    std::function<HttpResult(const std::string& url, const HttpHeaders& headers,
                             const std::string& body)>;

HttpPostFn default_http_post(); // defined in http_client.hpp

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_base_ms = 250;
    int backoff_max_ms = 8000;
};

/// Retries transport failures, 5xx and 429 with exponential backoff; any other
/// 4xx fails immediately. Returns the successful result and records the number
/// of attempts made.
inline HttpResult post_with_retry(const HttpPostFn& post, const std::string& url,
                                  const HttpHeaders& headers, const std::string& body,
                                  const RetryPolicy& policy, int* attempts_out = nullptr) {
    if (policy.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
    int attempt = 0;
    std::string last_error;
    for (;;) {
        ++attempt;
        if (attempts_out != nullptr) *attempts_out = attempt;
        bool retryable = false;
        try {
            HttpResult result = post(url, headers, body);
            if (result.status >= 200 && result.status < 300) return result;
            retryable = result.status >= 500 || result.status == 429;
            last_error = "HTTP " + std::to_string(result.status) + " from " + url +
                         (result.body.empty() ? "" : ": " + result.body.substr(0, 200));
            if (!retryable) throw TransportError(last_error, result.status, false);
        } catch (const TransportError& e) {
            if (!e.retryable()) throw;
            retryable = true;
            last_error = e.what();
        }
        if (attempt >= policy.max_attempts) {
            throw TransportError(last_error + " (after " + std::to_string(attempt) + " attempts)",
                                 0, false);
        }
        int delay = policy.backoff_base_ms << (attempt - 1);
        if (delay > policy.backoff_max_ms) delay = policy.backoff_max_ms;
        if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
}

/// Reads a credential from the environment; empty when unset.
inline std::string credential_from_env(const std::string& variable) {
    if (variable.empty()) return {};
    const char* value = std::getenv(variable.c_str());
    return value == nullptr ? std::string() : std::string(value);
}

} // namespace cmom
