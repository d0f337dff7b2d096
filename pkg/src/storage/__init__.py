"""Result table export."""
