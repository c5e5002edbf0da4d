"""
polyasym Modules
"""
