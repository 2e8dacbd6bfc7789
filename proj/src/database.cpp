#include "brew/database.hpp"

#include <sqlite3.h>

namespace brew::app {

DbError::DbError(const std::string& message, std::string statement)
    : std::runtime_error("SQL error: " + message + "\nstatement: " + statement),
      message_(message),
      statement_(std::move(statement))
{
}

Database::Database()
{
    if (sqlite3_open_v2(":memory:", &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw DbError("cannot open storage: " + msg, "");
    }
}

Database::~Database() { sqlite3_close(db_); }

void Database::exec_script(const std::string& sql)
{
    std::lock_guard lock(mu_);
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw DbError(msg, sql);
    }
}

namespace {

struct StmtDeleter {
    void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using Stmt = std::unique_ptr<sqlite3_stmt, StmtDeleter>;

Stmt prepare(sqlite3* db, const std::string& sql, const std::vector<SqlValue>& params)
{
    sqlite3_stmt* raw = nullptr;
    if (sqlite3_prepare_v2(db, sql.c_str(), static_cast<int>(sql.size()), &raw, nullptr) != SQLITE_OK) {
        throw DbError(sqlite3_errmsg(db), sql);
    }
    Stmt stmt(raw);
    if (!stmt) throw DbError("empty statement", sql);
    for (std::size_t i = 0; i < params.size(); ++i) {
        int idx = static_cast<int>(i + 1);
        int rc = std::visit(
            [&](const auto& v) -> int {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::nullptr_t>) {
                    return sqlite3_bind_null(stmt.get(), idx);
                } else if constexpr (std::is_same_v<T, std::int64_t>) {
                    return sqlite3_bind_int64(stmt.get(), idx, v);
                } else {
                    return sqlite3_bind_text(stmt.get(), idx, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
                }
            },
            params[i]);
        if (rc != SQLITE_OK) throw DbError(sqlite3_errmsg(db), sql);
    }
    return stmt;
}

}  // namespace

int Database::execute(const std::string& sql, const std::vector<SqlValue>& params)
{
    std::lock_guard lock(mu_);
    auto stmt = prepare(db_, sql, params);
    int rc;
    while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    }
    if (rc != SQLITE_DONE) throw DbError(sqlite3_errmsg(db_), sql);
    return sqlite3_changes(db_);
}

std::vector<Row> Database::query(const std::string& sql, const std::vector<SqlValue>& params)
{
    std::lock_guard lock(mu_);
    auto stmt = prepare(db_, sql, params);
    std::vector<Row> rows;
    int rc;
    while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
        int n = sqlite3_column_count(stmt.get());
        Row row;
        row.reserve(n);
        for (int c = 0; c < n; ++c) {
            if (sqlite3_column_type(stmt.get(), c) == SQLITE_NULL) {
                row.emplace_back(std::nullopt);
            } else {
                auto* txt = reinterpret_cast<const char*>(sqlite3_column_text(stmt.get(), c));
                row.emplace_back(std::string(txt, sqlite3_column_bytes(stmt.get(), c)));
            }
        }
        rows.push_back(std::move(row));
    }
    if (rc != SQLITE_DONE) throw DbError(sqlite3_errmsg(db_), sql);
    return rows;
}

}  // namespace brew::app
