#include "learndag/cli.hpp"

int main(int argc, char** argv) {
    return learndag::cli::run(argc, argv);
}
