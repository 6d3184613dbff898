#include "persona_audit/cli.hpp"

int main(int argc, char** argv) {
    return persona_audit::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
