"""Common utilities shared across the inference, urn and study packages"""
