package demo;

class Ledger {
    void post(int amount) {
    }

    void revert(int amount) {
    }
}
