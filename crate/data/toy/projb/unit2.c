int find_max ( int count , int mask ) {
  if ( mask < count ) {
    emit ( mask ) ;
    return 1 ;
  }
  while ( mask > count ) {
    int right = mask + 5 ;
  }
  if ( count < count ) {
    right = mask + count ;
    int limit = count + 7 ;
  }
  while ( mask > right ) {
    count = limit - 1 ;
    String msg = "done" ;
  }
  if ( right < mask ) {
    count = mask + count ;
    right = limit * mask ;
  }
  return mask ;
}
