#pragma once

#include <stdexcept>
#include <string>

namespace polhdr {

/// Pipeline stage a failure originated in. Drives the CLI exit code
/// (2 + enum value) so scripted harnesses can tell stages apart.
enum class Stage {
    Io = 0,
    Config = 1,
    Simulate = 2,
    Demux = 3,
    Calibrate = 4,
    Fuse = 5,
    Eval = 6,
    Sweep = 7,
};

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Io: return "io";
        case Stage::Config: return "config";
        case Stage::Simulate: return "simulate";
        case Stage::Demux: return "demux";
        case Stage::Calibrate: return "calibrate";
        case Stage::Fuse: return "fuse";
        case Stage::Eval: return "eval";
        case Stage::Sweep: return "sweep";
    }
    return "unknown";
}

inline int stage_exit_code(Stage s) { return 2 + static_cast<int>(s); }

class Error : public std::runtime_error {
  public:
    Error(Stage stage, const std::string& message)
        : std::runtime_error("[" + std::string(stage_name(stage)) + "] " + message),
          stage_(stage) {}

    Stage stage() const { return stage_; }

  private:
    Stage stage_;
};

}  // namespace polhdr
