#include <airyids/cli.hpp>

int main(int argc, char** argv) { return airyids::cli::run(argc, argv); }
