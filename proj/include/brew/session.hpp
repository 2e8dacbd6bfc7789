#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace brew::http {

inline constexpr const char* kSessionCookie = "BREWSESSION";

enum class Role { Anonymous, User, Admin };

std::string_view to_string(Role r);

/// Weak tokens are a zero-padded 8-digit hex counter; strong tokens carry
/// 128 bits from the system CSPRNG.
enum class TokenStrength { Weak, Strong };

struct SessionRecord {
    std::string session_id;
    std::optional<std::int64_t> user_id;
    Role role = Role::Anonymous;
    std::chrono::steady_clock::time_point created_at;
    std::optional<std::string> csrf_token;
};

/// Thread-safe session table.
class SessionStore {
public:
    SessionRecord create(TokenStrength strength);
    std::optional<SessionRecord> find(const std::string& id) const;
    /// Applies fn to the stored record; false if the id is not live.
    bool update(const std::string& id, const std::function<void(SessionRecord&)>& fn);
    bool erase(const std::string& id);
    void clear();
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, SessionRecord> sessions_;
    std::uint32_t counter_ = 0;
};

std::string format_weak_token(std::uint32_t counter);

}  // namespace brew::http
