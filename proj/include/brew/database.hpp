#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

struct sqlite3;

namespace brew::app {

/// SQL failure. what() carries the engine message and the statement text,
/// which is exactly what a verbose error page shows.
class DbError : public std::runtime_error {
public:
    DbError(const std::string& message, std::string statement);
    const std::string& statement() const { return statement_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    std::string statement_;
};

using SqlValue = std::variant<std::nullptr_t, std::int64_t, std::string>;
using Row = std::vector<std::optional<std::string>>;

/// In-memory SQLite database guarded by a mutex. Statements are compiled from
/// text, so whatever is concatenated into them is interpreted as SQL.
class Database {
public:
    Database();
    ~Database();
    Database(const Database&) = delete;
    Database& operator=(const Database&) = delete;

    /// Runs a script of one or more statements.
    void exec_script(const std::string& sql);
    /// Compiles the first statement of `sql`, binds params, steps it to
    /// completion and returns sqlite3_changes().
    int execute(const std::string& sql, const std::vector<SqlValue>& params = {});
    std::vector<Row> query(const std::string& sql, const std::vector<SqlValue>& params = {});

private:
    sqlite3* db_ = nullptr;
    mutable std::mutex mu_;
};

}  // namespace brew::app
