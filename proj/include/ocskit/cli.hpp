#pragma once

namespace ocskit {

// Exit codes: 0 success, 1 bound/audit violation, 2 configuration error.
int run_cli(int argc, const char* const* argv);

} // namespace ocskit
