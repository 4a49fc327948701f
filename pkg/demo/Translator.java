package demo;

import java.io.PrintWriter;
import java.util.List;

public class Translator {
    private int count;
    private List<String> word;

    @TransactionAttribute(REQUIRES_NEW)
    public synchronized void addTranslation(String word, String translation) {
        count = count + 1;
    }

    public List<String> getUsers(String status) {
        return null;
    }

    public void export() {
        PrintWriter out = new PrintWriter("words.txt");
        try {
            addTranslation("buon", "good");
            getUsers("active");
            Runtime.exec("sync");
        } catch (InvocationTargetException e) {
            e.printStackTrace();
        }
        out.close();
        System.out.println(count);
    }
}
