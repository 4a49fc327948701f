package demo;

class Orders {
    @TransactionAttribute(REQUIRES_NEW) void pay() {
    }

    @TransactionAttribute(NOT_SUPPORTED) void log() {
    }

    @TransactionAttribute(REQUIRES) void check() {
    }

    void run() {
        pay();
        log();
        check();
    }
}
