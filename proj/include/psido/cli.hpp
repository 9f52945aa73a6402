#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psido::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;   // parse or configuration error
inline constexpr int kUnreliable = 3;    // numerical result not trustworthy, or a failed check
inline constexpr int kPrecondition = 4;  // input outside an operation's domain

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct DemoCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<DemoCheck> run_demo(bool quick);

}  // namespace psido::cli
