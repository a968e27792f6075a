#ifndef AMBISPOT_LOG_HPP
#define AMBISPOT_LOG_HPP

#include <string>

namespace ambispot {

// Non-fatal diagnostics go to stderr. Kept out of stdout so command output
// files stay byte-stable.
void log_warning(const std::string& message);

}  // namespace ambispot

#endif
