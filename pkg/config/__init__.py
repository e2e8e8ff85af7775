# Django configuration package