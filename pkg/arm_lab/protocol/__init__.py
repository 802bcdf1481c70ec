"""Transcript wire format, answer grading and text statistics."""
