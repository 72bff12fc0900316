#pragma once

#include <string>

#include "ighsom/session.hpp"

namespace httplib {
class Server;
}

namespace ighsom {

/// Registers the session REST routes on `server`:
///   POST /sessions                              create a session
///   POST /sessions/{id}/data                    CSV body (text/csv) or {"csv": "..."}
///   POST /sessions/{id}/corpus                  {"documents": [{"id", "text"}, ...]}
///   POST /sessions/{id}/train                   {"seed": n, "params": {...}}
///   GET  /sessions/{id}/hierarchy
///   GET  /sessions/{id}/nodes/{path}/samples    path label URL-encoded, e.g. %5BR%5D%5B11%5D
///   POST /sessions/{id}/nodes/{path}/refine     {"seed": n, "params": {...overrides}}
///   GET  /sessions/{id}/rules
///   POST /sessions/{id}/filter                  {"records": [...] | "csv": "...", "rules": [...] | "IF ..."?}
///   GET  /sessions/{id}/snapshot, PUT /sessions/{id}/snapshot
void register_routes(httplib::Server& server, SessionManager& sessions);

/// HTTP status used for a library exception type.
int status_for_current_exception(std::string& message, Json& detail);

}  // namespace ighsom
