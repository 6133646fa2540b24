#include "nl2gql/cli.hpp"

int main(int argc, char** argv) { return nl2gql::run_cli(argc, argv); }
