#include <iostream>

int main() {
    std::cout << "crl: placeholder\n";
    return 0;
}
