#include "biaseval/cli.hpp"

int main(int argc, char** argv) {
    return biaseval::run_cli(argc, argv);
}
