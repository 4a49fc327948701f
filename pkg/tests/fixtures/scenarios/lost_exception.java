package demo;

class Worker {
    void work() {
        try {
            risky();
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
