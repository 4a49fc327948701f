package demo;

class Translator {
    void addTranslation(String word, String translation) {
    }

    String translate(String word) {
        return word;
    }

    void demo() {
        addTranslation("buon", "good");
        translate("buon");
    }
}
