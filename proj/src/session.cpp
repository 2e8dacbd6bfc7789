#include "brew/session.hpp"

#include "brew/crypto.hpp"

#include <cstdio>

namespace brew::http {

std::string_view to_string(Role r)
{
    switch (r) {
    case Role::Anonymous: return "anonymous";
    case Role::User: return "user";
    case Role::Admin: return "admin";
    }
    return "anonymous";
}

std::string format_weak_token(std::uint32_t counter)
{
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", counter);
    return buf;
}

SessionRecord SessionStore::create(TokenStrength strength)
{
    SessionRecord rec;
    rec.created_at = std::chrono::steady_clock::now();
    std::string id;
    if (strength == TokenStrength::Strong) {
        // Drawn outside the lock; RandomnessError propagates to the caller.
        id = crypto::random_token(16);
    }
    std::lock_guard lock(mu_);
    if (strength == TokenStrength::Weak) {
        do {
            id = format_weak_token(++counter_);
        } while (sessions_.contains(id));
    } else {
        while (sessions_.contains(id)) id = crypto::random_token(16);
    }
    rec.session_id = id;
    sessions_.emplace(id, rec);
    return rec;
}

std::optional<SessionRecord> SessionStore::find(const std::string& id) const
{
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
}

bool SessionStore::update(const std::string& id, const std::function<void(SessionRecord&)>& fn)
{
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    fn(it->second);
    return true;
}

bool SessionStore::erase(const std::string& id)
{
    std::lock_guard lock(mu_);
    return sessions_.erase(id) > 0;
}

void SessionStore::clear()
{
    std::lock_guard lock(mu_);
    sessions_.clear();
}

std::size_t SessionStore::size() const
{
    std::lock_guard lock(mu_);
    return sessions_.size();
}

}  // namespace brew::http
