#include "cookiewalk/cli.hpp"

int main(int argc, char** argv) {
  return cookiewalk::run_cli(argc, argv);
}
