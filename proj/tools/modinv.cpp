#include "modinv/cli.hpp"

int main(int argc, char** argv) {
  return modinv::cli::run_main(argc, argv);
}
