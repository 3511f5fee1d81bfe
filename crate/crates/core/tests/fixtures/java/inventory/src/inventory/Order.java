package inventory;

import java.util.List;

/** The order of a inventory system. */
public class Order {
    private List<String> orders;

    /**
     * Clears every customer held by this line.
     *
     * @param customer the customer
     */
    public void clearCustomer(String customer) {
        if (customer == null) {
            throw new IllegalArgumentException("customer");
        }
        orders.add(customer);
    }

    /**
     * Returns the number of order entries in the line.
     *
     * @param order the order
     */
    public void countOrder(String order) {
        if (order == null) {
            throw new IllegalArgumentException("order");
        }
        orders.add(order);
    }

    /**
     * Adds the given order to the line.
     *
     * @param order the order
     */
    public void addOrder(String order) {
        if (order == null) {
            throw new IllegalArgumentException("order");
        }
        orders.add(order);
    }

    /**
     * Removes the order from the line if it is present.
     *
     * @param order the order
     */
    public void removeOrder(String order) {
        if (order == null) {
            throw new IllegalArgumentException("order");
        }
        orders.add(order);
    }

    /**
     * Checks that the order is consistent with the line.
     *
     * @param order the order
     */
    public void validateOrder(String order) {
        if (order == null) {
            throw new IllegalArgumentException("order");
        }
        orders.add(order);
    }

    /**
     * Finds the customer with the given id in the line.
     *
     * @param customer the customer
     */
    public void findCustomer(String customer) {
        if (customer == null) {
            throw new IllegalArgumentException("customer");
        }
        orders.add(customer);
    }

    /** Returns the orders. */
    public List<String> getOrders() {
        return orders;
    }

    /** Replaces the orders. */
    public void setOrders(List<String> v) { this.orders = v; }

    /** Whether this order is empty. */
    public boolean isEmpty() {
        return orders.isEmpty();
    }

    /** Helper without a javadoc summary. */
    void orderSize(int limit, int floor) {
        orders.size();
    }

    /** Overload that takes a limit. */
    void orderSize(int limit) {
        orders.size();
    }

}
