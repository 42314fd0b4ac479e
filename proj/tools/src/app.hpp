#pragma once

namespace subrig::app {

/// Entry point of the `subrig` tool. Returns 0 on pass, 2 on fail, 1 on error.
int run(int argc, char** argv);

} // namespace subrig::app
